#include <gtest/gtest.h>

#include <random>

#include "crmadapt/errors.hpp"
#include "crmadapt/bounds/bounds.hpp"
#include "crmadapt/sim/norms.hpp"
#include "test_support.hpp"

namespace {

using namespace crmadapt;
using namespace crmadapt::bounds;
using namespace crmadapt::testsupport;

const BoundReport& find(const std::vector<BoundReport>& r, const std::string& name) {
    for (const auto& b : r) {
        if (b.bound_name == name) {
            return b;
        }
    }
    throw std::runtime_error("missing bound " + name);
}

TEST(EyCrm1, FirstOrderSpecialization) {
    // a_m = 1, l = 9: P = 1, mu = 10, bound (1/20)(|e0|^2 + |k_p| |phi0|^2/gamma)
    const auto r = bound_ey_crm1({10.0, 1.0, 1.0, 4.0, 3.0, 0.5, 2.0, 0.0});
    EXPECT_NEAR(r.analytic_value, (0.25 + 3.0 * 4.0 / 4.0) / 20.0, 1e-15);
    EXPECT_TRUE(r.satisfied);
}

TEST(EyCrm1, UnitSubstitution) {
    const auto r = bound_ey_crm1({10.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0});
    EXPECT_DOUBLE_EQ(r.analytic_value, 1.0 / 20.0);
}

TEST(EyCrm1, MatchedRunIsTriviallySatisfied) {
    const auto sc = matched(example1(), 20.0);
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop);
    const auto& b = find(evaluate_bounds(loop, tr), "ey_crm1");
    EXPECT_EQ(b.analytic_value, 0.0);
    EXPECT_LE(b.empirical_value, 1e-30);
    EXPECT_TRUE(b.satisfied);
}

TEST(EyCrm1, ExampleRunIsWithinBound) {
    const auto loop = sim::build_closed_loop(example1());
    const auto tr = sim::simulate(loop);
    const auto& b = find(evaluate_bounds(loop, tr), "ey_crm1");
    EXPECT_TRUE(b.satisfied) << b.empirical_value << " vs " << b.analytic_value;
    // phi(0) = -theta* = (-0.5, 1), mu = 10, |k_p| = 2, gamma = 10
    EXPECT_NEAR(b.analytic_value, 2.0 * 1.25 / (2.0 * 10.0 * 10.0), 1e-12);
}

TEST(EyCrm1, ViolationIsReported) {
    const auto r = bound_ey_crm1({10.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.06});
    EXPECT_FALSE(r.satisfied);
}

TEST(EaThetadot, GammaToZeroLimit) {
    for (double gamma : {1e-2, 1e-4, 1e-6}) {
        const auto [ea, td] = bound_ea_and_thetadot({2.0, 1.0, 1.0, gamma, 0.0, 1.0, 0.0, 0.0});
        EXPECT_DOUBLE_EQ(td.analytic_value, gamma / 2.0);
        EXPECT_DOUBLE_EQ(ea.analytic_value, 1.0 / (4.0 * gamma));
    }
}

TEST(EaThetadot, MatchedRunAllZero) {
    const auto sc = matched(example2(), 20.0);
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop);
    for (const auto& b : evaluate_bounds(loop, tr)) {
        ASSERT_TRUE(b.available) << b.bound_name << ": " << b.note;
        // bounds fed only by initial conditions vanish exactly; the rest carry
        // round-off of the logged |theta'|
        if (b.bound_name == "ea" || b.bound_name == "thetadot") {
            EXPECT_EQ(b.analytic_value, 0.0) << b.bound_name;
        } else {
            EXPECT_LE(b.analytic_value, 1e-24) << b.bound_name;
        }
        EXPECT_LE(b.empirical_value, 1e-28) << b.bound_name;
        EXPECT_TRUE(b.satisfied) << b.bound_name;
    }
}

TEST(EaThetadot, SecondExampleSatisfied) {
    // |phi_bar(0)| = 1, filters at rest
    const auto sc = offset_from_match(example2(), 0, 1.0);
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop);
    const auto r = evaluate_bounds(loop, tr);
    const auto& ea = find(r, "ea");
    const auto& td = find(r, "thetadot");
    EXPECT_TRUE(ea.satisfied);
    EXPECT_TRUE(td.satisfied);
    // minimal W'_f = 1/(s + 4): P = 1, mu = 4
    EXPECT_NEAR(ea.analytic_value, 1.0 / (2.0 * 4.0 * 5.0), 1e-12);
    EXPECT_NEAR(td.analytic_value, 5.0 / 2.0, 1e-12);
}

TEST(Echi, FrozenParametersAtRest) {
    auto sc = example2();
    sc.gamma = 0.0;
    sc.T = 20.0;
    sc = with_theta(sc, vec({0.3, 0.2, -0.1}));
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop);
    const auto& b = find(evaluate_bounds(loop, tr), "echi");
    EXPECT_EQ(b.analytic_value, 0.0);
    EXPECT_LE(b.empirical_value, 1e-24);
    EXPECT_TRUE(b.satisfied);
}

TEST(Echi, StrictlyDecreasingInFilterPole) {
    for (double f1 : {0.1, 0.5, 1.0, 2.0, 7.0}) {
        const auto a = bound_echi({f1, 0.3, 2.0, 0.7, 0.0});
        const auto b = bound_echi({2.0 * f1, 0.3, 2.0, 0.7, 0.0});
        EXPECT_LT(b.analytic_value, a.analytic_value) << f1;
    }
}

TEST(Echi, ClosedFormValue) {
    const double f1 = 2.0, e0 = 0.5, w = 3.0, td = 0.25;
    const auto r = bound_echi({f1, e0, w, td, 0.0});
    const double three_term = 3.0 * (e0 * e0 / (2 * f1) + (e0 * e0 / (4 * f1 * f1) + w * w / (f1 * f1 * f1)) * td * td);
    EXPECT_NEAR(r.analytic_value, three_term, 1e-14);
}

TEST(Ezeta, DecreasingInMu) {
    for (double mu : {0.5, 1.0, 3.0}) {
        EzetaInputs in{mu, 2.0, 1.5, 0.1, 0.2, 3.0, 0.4, 0.0, 0.0, 0.0, std::nullopt};
        const auto a = bound_ezeta_and_ey(in).first;
        in.mu *= 2.0;
        const auto b = bound_ezeta_and_ey(in).first;
        EXPECT_LT(b.analytic_value, a.analytic_value);
    }
}

TEST(Ezeta, MatchedRunAllZero) {
    const auto sc = matched(example2(), 20.0);
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop);
    const auto r = evaluate_bounds(loop, tr);
    EXPECT_LE(find(r, "ezeta").analytic_value, 1e-24);
    EXPECT_LE(find(r, "ey_composite").empirical_value, 1e-28);
}

TEST(Ezeta, SecondExampleSatisfied) {
    const auto sc = offset_from_match(example2(), 0, 1.0);
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop);
    const auto r = evaluate_bounds(loop, tr);
    for (const char* name : {"echi", "ezeta", "ey_composite"}) {
        EXPECT_TRUE(find(r, name).satisfied) << name;
        EXPECT_TRUE(find(r, name).available) << name;
    }
}

TEST(Composite, HoldsOnEveryAugmentedTrace) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> f(0.5, 6.0);
    for (int trial = 0; trial < 6; ++trial) {
        auto sc = offset_from_match(example2(), trial % 3, trial % 2 ? 1.0 : -0.5);
        sc.filter_f = {f(rng)};
        sc.T = 60.0;
        try {
            const auto loop = sim::build_closed_loop(sc);
            const auto tr = sim::simulate(loop);
            EXPECT_TRUE(find(evaluate_bounds(loop, tr), "ey_composite").satisfied) << "f1 = " << sc.filter_f[0];
        } catch (const PreconditionError&) {
            // f1 too large for an SPR W'_f; not a candidate
        }
    }
}

TEST(MConst, ScalarEqualityCase) {
    EXPECT_EQ(m_const(Matrix::Constant(1, 1, -5.0), 5.0), 1.0);
}

TEST(MConst, NormalRealSpectrum) {
    Matrix A(2, 2);
    A << -2.0, 0.0, 0.0, -4.0;
    EXPECT_NEAR(m_const(A, 2.0), 1.0, 1e-12);
}

TEST(MConst, CompanionExceedsOneAndMatchesDenseSampling) {
    Matrix A(2, 2);
    A << 0.0, -8.0, 1.0, -6.0;
    const double m = m_const(A, 2.0);
    EXPECT_GT(m, 1.0);
    double dense = 1.0;
    for (int k = 0; k <= 200000; ++k) {
        const double t = 25.0 * k / 200000.0;
        const Matrix E = oracle_expm(A * t);
        dense = std::max(dense, E.jacobiSvd().singularValues()(0) * std::exp(2.0 * t));
    }
    EXPECT_LE(m, dense * (1.0 + 1e-12));
    EXPECT_NEAR(m, dense, 1e-3 * dense);
}

TEST(MConst, NonHurwitzRejected) {
    EXPECT_THROW(m_const(Matrix::Constant(1, 1, 0.5), 1.0), std::domain_error);
}

TEST(Kernels, Values) {
    EXPECT_EQ(kernels(3.0, 2.0, 1.5, 1.5).phi_f, 1.0);
    EXPECT_EQ(kernels(3.0, 2.0, 1.5, 1.5).phi_mu, 1.0);
    EXPECT_DOUBLE_EQ(kernels(1.0, 1.0, 2.0, 1.0).phi_f, std::exp(-1.0));
    const double lhs = kernels(3.0, 1.0, 2.0, 0.0).phi_f;
    const double rhs = kernels(3.0, 1.0, 2.0, 1.0).phi_f * kernels(3.0, 1.0, 1.0, 0.0).phi_f;
    EXPECT_NEAR(lhs, rhs, 1e-15);
    EXPECT_THROW(kernels(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(Reports, FirstOrderFamiliesOnlyReportOutputBound) {
    auto sc = example1();
    sc.T = 5.0;
    const auto loop = sim::build_closed_loop(sc);
    const auto r = evaluate_bounds(loop, sim::simulate(loop));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].bound_name, "ey_crm1");
}

TEST(Reports, HigherOrderFilterHasNoClosedForm) {
    auto sc = example2(lintf::RationalTransfer(1.0, lintf::Polynomial{1.0}, lintf::Polynomial{1.0, 2.0, 3.0, 1.0}));
    sc.reference = lintf::RationalTransfer(1.0, lintf::Polynomial{1.0}, lintf::Polynomial{1.0, 6.0, 11.0, 6.0});
    sc.ell = Vector::Zero(3);
    sc.filter_f = {1.0, 2.0};
    sc.T = 5.0;
    const auto loop = sim::build_closed_loop(sc);
    const auto r = evaluate_bounds(loop, sim::simulate(loop));
    EXPECT_FALSE(find(r, "echi").available);
    EXPECT_FALSE(find(r, "ezeta").available);
}

}  // namespace
