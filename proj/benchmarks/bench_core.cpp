#include <benchmark/benchmark.h>

#include "crmadapt/bounds/bounds.hpp"
#include "crmadapt/lintf/kyp.hpp"
#include "crmadapt/lintf/spr.hpp"
#include "crmadapt/matching/matching.hpp"
#include "crmadapt/realize/realize.hpp"
#include "crmadapt/sim/simulate.hpp"

namespace {

using namespace crmadapt;
using lintf::Polynomial;
using lintf::RationalTransfer;

sim::Scenario first_order() {
    sim::Scenario sc;
    sc.plant = RationalTransfer(2.0, Polynomial{1.0}, Polynomial{1.0, -1.0});
    sc.reference = RationalTransfer(1.0, Polynomial{1.0}, Polynomial{1.0, 1.0});
    sc.ell = Vector::Constant(1, -9.0);
    sc.family = sim::Family::crm_n1;
    sc.gamma = 10.0;
    sc.signal.type = sim::SignalSpec::Type::square;
    sc.signal.period = 20.0;
    sc.T = 100.0;
    return sc;
}

sim::Scenario second_order() {
    sim::Scenario sc;
    sc.plant = RationalTransfer(1.0, Polynomial{1.0}, Polynomial{1.0, -1.0, 2.0});
    sc.reference = RationalTransfer(1.0, Polynomial{1.0}, Polynomial{1.0, 3.0, 2.0});
    sc.ell = (Vector(2) << -6.0, -3.0).finished();
    sc.family = sim::Family::crm_high_known;
    sc.filter_f = {2.0};
    sc.gamma = 5.0;
    sc.signal.type = sim::SignalSpec::Type::square;
    sc.signal.period = 20.0;
    sc.T = 200.0;
    return sc;
}

void BM_Rk4Step(benchmark::State& state) {
    Matrix A = Matrix::Random(8, 8) - 4.0 * Matrix::Identity(8, 8);
    const sim::DerivativeFn f = [&A](double, const Vector& x) -> Vector { return A * x; };
    Vector x = Vector::Ones(8);
    for (auto _ : state) {
        x = sim::rk4_step(f, x, 0.0, 1e-3);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_Rk4Step);

void BM_SimulateFirstOrder(benchmark::State& state) {
    const auto loop = sim::build_closed_loop(first_order());
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::simulate(loop).int_ey2);
    }
}
BENCHMARK(BM_SimulateFirstOrder)->Unit(benchmark::kMillisecond);

void BM_SimulateAugmented(benchmark::State& state) {
    const auto loop = sim::build_closed_loop(second_order());
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::simulate(loop).int_ey2);
    }
}
BENCHMARK(BM_SimulateAugmented)->Unit(benchmark::kMillisecond);

void BM_EvaluateBounds(benchmark::State& state) {
    const auto loop = sim::build_closed_loop(second_order());
    const auto trace = sim::simulate(loop);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bounds::evaluate_bounds(loop, trace).size());
    }
}
BENCHMARK(BM_EvaluateBounds)->Unit(benchmark::kMillisecond);

void BM_IsSpr(benchmark::State& state) {
    const RationalTransfer w(1.0, Polynomial{1.0, 2.0, 1.0}, Polynomial{1.0, 6.0, 11.0, 6.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(lintf::is_spr(w).verdict);
    }
}
BENCHMARK(BM_IsSpr);

void BM_KypSolve(benchmark::State& state) {
    const RationalTransfer w(1.0, Polynomial{1.0, 1.0}, Polynomial{1.0, 7.0, 14.0});
    const auto model = realize::observer_canonical(w);
    // below the zero at -1, where a certificate exists
    const double mu = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lintf::kyp_solve(model, mu).P(0, 0));
    }
}
BENCHMARK(BM_KypSolve);

void BM_BezoutMatch(benchmark::State& state) {
    const RationalTransfer plant(2.0, Polynomial{1.0, 1.0}, Polynomial{1.0, 1.0, 1.0, -1.0});
    const RationalTransfer wm(1.0, Polynomial{1.0, 2.0}, Polynomial{1.0, 6.0, 11.0, 6.0});
    const auto filter = realize::make_regressor_filter(matching::filter_polynomial(plant, wm));
    for (auto _ : state) {
        benchmark::DoNotOptimize(matching::bezout_match(plant, wm, filter.Lambda, filter.b_lambda).k_star);
    }
}
BENCHMARK(BM_BezoutMatch);

}  // namespace

BENCHMARK_MAIN();
