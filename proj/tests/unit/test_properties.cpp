// Randomized checks of the library-wide invariants.
#include <gtest/gtest.h>

#include <random>

#include "crmadapt/errors.hpp"
#include "crmadapt/bounds/bounds.hpp"
#include "crmadapt/lintf/kyp.hpp"
#include "crmadapt/lintf/spr.hpp"
#include "crmadapt/matching/matching.hpp"
#include "crmadapt/realize/realize.hpp"
#include "test_support.hpp"

namespace {

using namespace crmadapt;
using namespace crmadapt::testsupport;
using lintf::Polynomial;
using lintf::RationalTransfer;

RationalTransfer random_tf(std::mt19937_64& rng, int max_degree, bool allow_unstable) {
    std::uniform_int_distribution<int> deg(1, max_degree);
    const int n = deg(rng);
    std::uniform_int_distribution<int> zdeg(0, n - 1);
    const int z = zdeg(rng);
    std::uniform_real_distribution<double> k(0.2, 4.0);
    std::bernoulli_distribution neg(0.15);
    return RationalTransfer(neg(rng) ? -k(rng) : k(rng), random_poly_any(rng, z, -3.0, allow_unstable ? 0.5 : -0.1),
                            random_poly_any(rng, n, -3.0, allow_unstable ? 0.5 : -0.1));
}

TEST(LintfProperty, PrimeRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> c(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 5;
        std::vector<double> num(static_cast<std::size_t>(n));
        std::vector<double> den(static_cast<std::size_t>(n + 1));
        for (auto& v : num) v = c(rng);
        for (auto& v : den) v = c(rng);
        num[0] = num[0] == 0.0 ? 1.0 : num[0];
        den[0] = den[0] == 0.0 ? 1.0 : den[0];
        const auto d = lintf::prime_decompose(Polynomial(num), Polynomial(den));
        EXPECT_TRUE(d.prime.numerator().is_monic());
        EXPECT_TRUE(d.prime.denominator().is_monic());
        // k N'/D' equals N/D: compare k N' D with N D' coefficientwise
        const Polynomial lhs = d.k * d.prime.numerator() * Polynomial(den);
        const Polynomial rhs = Polynomial(num) * d.prime.denominator();
        double scale = 0.0;
        for (double v : rhs.coefficients()) scale = std::max(scale, std::abs(v));
        EXPECT_LE(lintf::max_coefficient_difference(lhs, rhs), 1e-14 * scale * 8.0);
    }
}

TEST(LintfProperty, SprVerdictStableUnderGridRefinement) {
    std::mt19937_64 rng(2);
    int positives = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto w = random_tf(rng, 4, trial % 2 == 0);
        const auto coarse = lintf::is_spr(w);
        const auto fine = lintf::is_spr(w, lintf::FrequencyGrid{1e-6, 1e6, 40960});
        EXPECT_EQ(coarse.verdict, fine.verdict) << "trial " << trial;
        positives += coarse.verdict ? 1 : 0;
    }
    EXPECT_GT(positives, 5);
    EXPECT_LT(positives, 95);
}

TEST(LintfProperty, KypInvariantsOnRandomSpr) {
    std::mt19937_64 rng(3);
    int solved = 0;
    for (int trial = 0; trial < 300 && solved < 40; ++trial) {
        const auto w = random_tf(rng, 2, false);
        if (w.relative_degree() != 1 || !lintf::is_spr(w).verdict) {
            continue;
        }
        const auto m = realize::observer_canonical(w);
        const double mu = 0.5 * lintf::decay_rate_mu(w.denominator());
        lintf::KypSolution k;
        try {
            k = lintf::kyp_solve(m, mu);
        } catch (const lintf::KypError&) {
            continue;  // mu can exceed what a slow zero allows
        }
        ++solved;
        EXPECT_LE((k.P - k.P.transpose()).norm(), 1e-12);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(k.P).eigenvalues().minCoeff(), 0.0);
        EXPECT_LE((k.P * m.b - m.c).norm(), 1e-9);
        EXPECT_LE(k.residual, 1e-8);
    }
    EXPECT_GE(solved, 20);
}

TEST(LintfProperty, DecayRateIsMinimum) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const Polynomial p = random_poly_any(rng, 1 + trial % 5, -4.0, -0.05);
        const double mu = lintf::decay_rate_mu(p);
        for (const auto& z : lintf::roots(p).roots) {
            EXPECT_LE(mu, std::abs(z.real()) * (1.0 + 1e-9));
        }
    }
}

TEST(RealizeProperty, DesignGainRoundTrip) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + trial % 4;
        const RationalTransfer wm(1.0, random_real_roots(rng, trial % m, -3.0, -0.5),
                                  random_poly_any(rng, m, -3.0, -0.2));
        const Polynomial target = random_poly_any(rng, m, -6.0, -0.5);
        const auto t = lintf::roots(target).roots;
        const auto e = realize::crm_error_tf(wm, realize::design_gain(wm, t));
        EXPECT_LE(lintf::max_coefficient_difference(e.we.denominator(), Polynomial::from_roots(t)), 1e-12)
            << "trial " << trial;
    }
}

TEST(RealizeProperty, ZeroGainIsExactlyTheModel) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + trial % 4;
        const RationalTransfer wm(2.0, random_real_roots(rng, trial % m, -3.0, -0.5),
                                  random_poly_any(rng, m, -3.0, -0.2));
        const auto we = realize::crm_error_tf(wm, Vector::Zero(m)).we.prime();
        EXPECT_EQ(we.numerator(), wm.numerator());
        EXPECT_EQ(we.denominator(), wm.denominator());
    }
}

TEST(RealizeProperty, ReferenceModelReconstruction) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + trial % 4;
        const RationalTransfer wm(1.0 + trial % 3, random_real_roots(rng, trial % m, -3.0, -0.5),
                                  random_poly_any(rng, m, -3.0, -0.2));
        Vector ell(m);
        for (int i = 0; i < m; ++i) ell(i) = g(rng);
        const auto ref = realize::make_reference_model(wm, ell);
        Vector last = Vector::Zero(m);
        last(m - 1) = 1.0;
        EXPECT_EQ(ref.cm, last);
        for (int k = 0; k < 20; ++k) {
            const std::complex<double> s(0.0, std::pow(10.0, -2.0 + 0.2 * k));
            EXPECT_LT(std::abs(ref.km * ss_response(ref.Am, ref.bm, ref.cm, s) - wm(s)) / std::abs(wm(s)), 1e-8);
        }
    }
}

TEST(RealizeProperty, NonMinimalEqualsMinimal) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        const int nstar = 1 + (trial / 3) % n;
        const auto p = random_pair(rng, n, nstar);
        const auto f = realize::make_regressor_filter(matching::filter_polynomial(p.plant, p.wm));
        const auto th = matching::bezout_match(p.plant, p.wm, f.Lambda, f.b_lambda);
        const auto nm = realize::nonminimal_error_model(p.plant, f.Lambda, f.b_lambda, th.full(), p.ell, p.wm);
        const auto we = realize::crm_error_tf(p.wm, p.ell).we.prime();
        for (int k = 0; k < 20; ++k) {
            const std::complex<double> s(0.0, std::pow(10.0, -2.0 + 4.0 * k / 19.0));
            const auto want = p.plant.gain() * we(s);
            EXPECT_LT(std::abs(nm.response(s) - want) / std::abs(want), 1e-8) << "trial " << trial;
        }
    }
}

// Second-order n* = 1 scenarios with random SPR-compatible data.
sim::Scenario random_n1_scenario(std::mt19937_64& rng) {
    for (;;) {
        auto p = random_pair(rng, 2, 1);
        sim::Scenario sc;
        sc.plant = p.plant;
        sc.reference = p.wm;
        sc.family = sim::Family::crm_n1;
        std::uniform_real_distribution<double> pole(1.0, 6.0);
        const std::vector<std::complex<double>> t{{-pole(rng), 0.0}, {-pole(rng), 0.0}};
        sc.ell = realize::design_gain(p.wm, t);
        sc.gamma = 2.0;
        sc.T = 20.0;
        sc = square_wave(sc, 1.0, 10.0);
        try {
            sim::build_closed_loop(sc);
            return sc;
        } catch (const PreconditionError&) {
        }
    }
}

TEST(MatchingProperty, FrozenIdealParametersTrackExactly) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        auto sc = matched(random_n1_scenario(rng), 20.0);
        sc.gamma = 0.0;
        EXPECT_LE(sup_abs(sim::simulate(sc).ey), 1e-8) << "trial " << trial;
    }
}

TEST(ControllerProperty, FrozenIdealParametersEveryFamily) {
    for (auto f : all_families()) {
        auto sc = matched(family_scenario(f), 30.0);
        sc.gamma = 0.0;
        EXPECT_LE(sup_abs(sim::simulate(sc).ey), 1e-8) << controllers::family_name(f);
    }
}

TEST(ControllerProperty, ZeroGainReductionBitForBit) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 3; ++trial) {
        auto crm = random_n1_scenario(rng);
        crm.ell = Vector::Zero(2);
        crm.theta0.kind = ThetaInit::Kind::random;
        crm.seed = static_cast<std::uint64_t>(trial);
        auto orm = crm;
        orm.family = sim::Family::orm_n1;
        try {
            const auto a = sim::simulate(crm);
            const auto b = sim::simulate(orm);
            EXPECT_EQ(a.ey, b.ey);
            EXPECT_EQ(a.u, b.u);
        } catch (const PreconditionError&) {
            // W'_m itself may not be SPR for this draw
        }
    }
}

// V = ebar' P ebar + phi' phi / (gamma |k_p|) with ebar = e_m / k_p
std::vector<double> lyapunov_trace(const sim::ClosedLoop& loop, const sim::SimTrace& tr) {
    const auto& ref = loop.reference_model();
    const StateSpaceModel model{ref.error_matrix(), ref.bm, ref.cm};
    // any feasible decay rate certifies monotonicity
    double mu = lintf::decay_rate_mu(loop.we_prime().denominator());
    lintf::KypSolution kyp;
    for (;; mu *= 0.5) {
        try {
            kyp = lintf::kyp_solve(model, mu);
            break;
        } catch (const lintf::KypError&) {
            if (mu < 1e-6) throw;
        }
    }
    const double kp = loop.kp();
    const double gamma = loop.scenario().gamma;
    std::vector<double> v(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const Vector e = tr.state_block(k, tr.layout.em_monitor) / kp;
        const Vector phi = tr.state_block(k, tr.layout.theta) - loop.theta_star();
        v[k] = e.dot(kyp.P * e) + phi.squaredNorm() / (gamma * std::abs(kp));
    }
    return v;
}

TEST(ControllerProperty, LyapunovNonIncreasing) {
    std::mt19937_64 rng(11);
    std::vector<sim::Scenario> cases{example1()};
    cases.back().T = 30.0;
    for (int i = 0; i < 3; ++i) {
        auto sc = random_n1_scenario(rng);
        sc.theta0.kind = ThetaInit::Kind::random;
        sc.seed = static_cast<std::uint64_t>(i);
        cases.push_back(sc);
    }
    for (const auto& sc : cases) {
        const auto loop = sim::build_closed_loop(sc);
        const auto tr = sim::simulate(loop, {.record_states = true});
        const auto v = lyapunov_trace(loop, tr);
        const double slack = 10.0 * sc.h * sc.h;
        double worst = -1e300;
        for (std::size_t k = 1; k < v.size(); ++k) {
            worst = std::max(worst, v[k] - v[k - 1]);
        }
        EXPECT_LE(worst, slack);
    }
}

TEST(BoundsProperty, EveryReportSatisfiedOnValidScenarios) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 4; ++trial) {
        auto sc = random_n1_scenario(rng);
        sc.theta0.kind = ThetaInit::Kind::random;
        sc.seed = static_cast<std::uint64_t>(trial);
        const auto loop = sim::build_closed_loop(sc);
        for (const auto& b : bounds::evaluate_bounds(loop, sim::simulate(loop))) {
            if (b.available) {
                EXPECT_TRUE(b.satisfied) << b.bound_name << " " << b.empirical_value << " > " << b.analytic_value;
            }
        }
    }
    for (double delta : {-1.0, 0.5}) {
        for (Eigen::Index i = 0; i < 3; ++i) {
            auto sc = offset_from_match(example2(), i, delta);
            sc.T = 100.0;
            const auto loop = sim::build_closed_loop(sc);
            for (const auto& b : bounds::evaluate_bounds(loop, sim::simulate(loop))) {
                EXPECT_TRUE(b.available) << b.bound_name;
                EXPECT_TRUE(b.satisfied) << b.bound_name << " " << b.empirical_value << " > " << b.analytic_value;
            }
        }
    }
}

TEST(BoundsProperty, OutputBoundStrictlyDecreasingInMu) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        bounds::EyCrm1Inputs in{u(rng), 1.0 + u(rng), 1.0, u(rng), u(rng), u(rng), u(rng), 0.0};
        in.lambda_min = in.lambda_max / (1.0 + u(rng));
        const double a = bounds::bound_ey_crm1(in).analytic_value;
        in.mu *= 2.0;
        EXPECT_LT(bounds::bound_ey_crm1(in).analytic_value, a);
    }
}

TEST(BoundsProperty, MConstAtLeastOne) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const Polynomial p = random_poly_any(rng, 1 + trial % 4, -4.0, -0.1);
        const auto m = realize::observer_canonical(RationalTransfer(1.0, Polynomial{1.0}, p));
        EXPECT_GE(bounds::m_const(m.A, lintf::decay_rate_mu(p)), 1.0);
    }
}

TEST(SimProperty, ResolvedScenarioReproducesTrace) {
    auto sc = example1();
    sc.theta0.kind = ThetaInit::Kind::random;
    sc.seed = 99;
    sc.T = 10.0;
    const auto a = sim::simulate(sc);
    const auto b = sim::simulate(sim::resolve(sc));
    EXPECT_EQ(a.ey, b.ey);
    EXPECT_EQ(a.theta_norm, b.theta_norm);
}

}  // namespace
