#include <gtest/gtest.h>

#include "crmadapt/controllers/controllers.hpp"
#include "crmadapt/realize/realize.hpp"
#include "crmadapt/sim/norms.hpp"
#include "crmadapt/sim/simulate.hpp"
#include "test_support.hpp"

namespace {

using namespace crmadapt;
using namespace crmadapt::controllers;
using lintf::Polynomial;
using lintf::RationalTransfer;
using testsupport::vec;

TEST(ReferenceModelStep, OpenLoopStep) {
    const auto ref = realize::make_reference_model(RationalTransfer(1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}),
                                                   Vector::Zero(1));
    const auto s = reference_model_step(ref, Vector::Zero(1), 1.0, 0.3);
    EXPECT_EQ(s.dx(0), 1.0);
    EXPECT_EQ(s.ym, 0.0);
}

TEST(ReferenceModelStep, NoCorrectionWhenTracking) {
    const RationalTransfer wm(2.0, Polynomial{1.0, 1.0}, Polynomial{1.0, 3.0, 4.0});
    const auto crm = realize::make_reference_model(wm, vec({-4.0, -1.0}));
    const auto orm = realize::make_reference_model(wm, Vector::Zero(2));
    const Vector xm = vec({0.2, -0.7});
    const double ym = -0.7;
    const auto a = reference_model_step(crm, xm, 1.3, ym);
    const auto b = reference_model_step(orm, xm, 1.3, ym);
    EXPECT_EQ(a.ym, ym);
    EXPECT_EQ(a.dx, b.dx);
}

TEST(ReferenceModelStep, FirstOrderCorrection) {
    // a_m = 1, ell = -9, x_m = 0.5, y = 1: -0.5 - (-9)(1 - 0.5)
    const auto ref = realize::make_reference_model(RationalTransfer(1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}),
                                                   vec({-9.0}));
    const auto s = reference_model_step(ref, vec({0.5}), 0.0, 1.0);
    EXPECT_EQ(s.ym, 0.5);
    EXPECT_DOUBLE_EQ(s.dx(0), 4.0);
}

realize::RegressorFilter empty_filter() { return realize::make_regressor_filter(Polynomial{1.0}); }

TEST(CtrlN1, ZeroErrorFreezesParameters) {
    const RegressorState s{Vector(0), Vector(0)};
    const auto o = ctrl_n1(empty_filter(), s, vec({0.4, -1.2}), 2.0, 2.0, 1.0, 5.0, 1.0);
    EXPECT_EQ(o.dtheta, Vector::Zero(2));
}

TEST(CtrlN1, DirectSubstitution) {
    const RegressorState s{Vector(0), Vector(0)};
    // omega = (r, y) = (2, 3), e_y = 0.5
    const auto o = ctrl_n1(empty_filter(), s, vec({1.0, 1.0}), 3.0, 2.5, 2.0, 2.0, 1.0);
    EXPECT_EQ(o.u, 5.0);
    EXPECT_EQ(o.dtheta, vec({-2.0, -3.0}));
    const auto neg = ctrl_n1(empty_filter(), s, vec({1.0, 1.0}), 3.0, 2.5, 2.0, 2.0, -1.0);
    EXPECT_EQ(neg.dtheta, vec({2.0, 3.0}));
}

TEST(CtrlN1, RegressorOrdering) {
    const RegressorState s{vec({1.0, 2.0}), vec({3.0, 4.0})};
    EXPECT_EQ(regressor(9.0, s, 7.0), vec({9.0, 1.0, 2.0, 7.0, 3.0, 4.0}));
    EXPECT_EQ(regressor_bar(s, 7.0), vec({1.0, 2.0, 7.0, 3.0, 4.0}));
}

TEST(CtrlN1, RegressorFiltersFollowLambda) {
    const auto f = realize::make_regressor_filter(Polynomial{1.0, 3.0, 2.0});
    const RegressorState s{vec({0.1, 0.2}), vec({-0.3, 0.4})};
    const auto d = regressor_derivative(f, s, 1.5, -2.0);
    EXPECT_LE((d.omega1 - (f.Lambda * s.omega1 + f.b_lambda * 1.5)).norm(), 1e-15);
    EXPECT_LE((d.omega2 - (f.Lambda * s.omega2 + f.b_lambda * -2.0)).norm(), 1e-15);
}

TEST(CtrlN2, ZeroErrorUsesPlainLaw) {
    const auto f = realize::make_regressor_filter(Polynomial{1.0, 1.0});
    const RegressorState s{vec({0.3}), vec({-0.2})};
    const Vector theta = vec({1.0, 0.5, -0.5, 2.0});
    const auto o = ctrl_n2(f, s, theta, vec({0.1, 0.2, 0.3, 0.4}), 1.0, 1.0, 2.0, 3.0, 1.0, 2.0);
    EXPECT_EQ(o.dtheta, Vector::Zero(4));
    EXPECT_DOUBLE_EQ(o.u, theta.dot(regressor(2.0, s, 1.0)));
}

TEST(CtrlN2, ZeroFilteredRegressorFreezesParameters) {
    const auto f = realize::make_regressor_filter(Polynomial{1.0, 1.0});
    const RegressorState s{vec({0.3}), vec({-0.2})};
    const auto o = ctrl_n2(f, s, vec({1.0, 0.5, -0.5, 2.0}), Vector::Zero(4), 1.0, 0.2, 2.0, 3.0, 1.0, 2.0);
    EXPECT_EQ(o.dtheta, Vector::Zero(4));
}

TEST(CtrlN2, FilteredRegressorSolvesLinearOde) {
    // omega = (1, 0, 1, 0) held constant, zeta(0) = 0, a = 2
    const auto f = realize::make_regressor_filter(Polynomial{1.0, 1.0});
    const RegressorState s{Vector::Zero(1), Vector::Zero(1)};
    const Vector theta = Vector::Zero(4);
    const sim::DerivativeFn rhs = [&](double, const Vector& z) {
        return ctrl_n2(f, s, theta, z, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0).dzeta;
    };
    Vector z = Vector::Zero(4);
    const double h = 1e-3;
    for (int k = 0; k < 1000; ++k) {
        z = sim::rk4_step(rhs, z, k * h, h);
    }
    const double expect = (1.0 - std::exp(-2.0)) / 2.0;
    EXPECT_NEAR(z(0), expect, 1e-12);
    EXPECT_NEAR(z(1), 0.0, 1e-15);
    EXPECT_NEAR(z(2), expect, 1e-12);
    EXPECT_NEAR(z(3), 0.0, 1e-15);
}

TEST(FilterChain, UnityDcGainChain) {
    const FilterChain F({1.0, 3.0});
    EXPECT_EQ(F.order(), 2);
    EXPECT_EQ(F.denominator(), (Polynomial{1.0, 4.0, 3.0}));
    // F(s) = 1/((s+1)(s+3)): steady state under unit input is 1/3
    const Vector xss = -F.model().A.partialPivLu().solve(F.model().b);
    EXPECT_NEAR(F.output(xss, 1.0), 1.0 / 3.0, 1e-14);
    EXPECT_THROW(FilterChain({-1.0}), std::invalid_argument);
}

TEST(FilterChain, EmptyChainIsIdentity) {
    const FilterChain F;
    EXPECT_EQ(F.order(), 0);
    EXPECT_EQ(F.output(Vector(0), 2.5), 2.5);
}

TEST(HighKnown, AugmentedStateFollowsErrorDynamicsWhenUndriven) {
    const auto sc = testsupport::example2();
    const auto loop = sim::build_closed_loop(sc);
    const FilterChain& F = loop.filter_chain();
    const auto& wf = loop.wf_model();
    const RegressorState s{vec({0.4}), vec({-0.1})};
    AugmentedState aug{Matrix::Zero(1, 3), Vector::Zero(1), vec({0.3, -0.8})};
    // theta = 0 makes e_chi vanish, zeta = 0 removes the normalizing term
    const auto o = ctrl_highrel_known(loop.regressor_filter(), F, wf, s, aug, Vector::Zero(3), 1.0, 1.0, 0.0, 5.0);
    EXPECT_EQ(o.signals.echi, 0.0);
    EXPECT_LE((o.daug.ea - wf.A * aug.ea).norm(), 1e-15);
    EXPECT_EQ(o.dtheta, Vector::Zero(3));
    EXPECT_DOUBLE_EQ(o.u, 0.0);
}

TEST(HighKnown, FrozenParametersGiveZeroAuxiliaryError) {
    auto sc = testsupport::example2();
    sc.gamma = 0.0;
    sc.T = 20.0;
    sc = testsupport::with_theta(sc, vec({0.7, -1.1, 0.4}));
    const auto tr = sim::simulate(sc);
    EXPECT_LE(testsupport::sup_abs(tr.echi), 1e-12);
}

TEST(HighKnown, AuxiliaryErrorMatchesOfflineFiltering) {
    auto sc = testsupport::offset_from_match(testsupport::example2(), 0, 1.0);
    sc.T = 20.0;
    const auto loop = sim::build_closed_loop(sc);
    const auto tr = sim::simulate(loop, {.record_states = true});
    const auto& L = tr.layout;
    std::vector<double> tw(tr.size());
    std::vector<double> tz(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const Vector th = tr.state_block(k, L.theta);
        const RegressorState rs{tr.state_block(k, L.omega1), tr.state_block(k, L.omega2)};
        const Vector wb = regressor_bar(rs, tr.y[k]);
        tw[k] = th.dot(wb);
        const Vector zs = tr.state_block(k, L.zeta);
        Vector zeta(wb.size());
        for (Eigen::Index j = 0; j < wb.size(); ++j) {
            zeta(j) = loop.filter_chain().output(zs.segment(j * loop.filter_chain().order(),
                                                            loop.filter_chain().order()),
                                                 wb(j));
        }
        tz[k] = th.dot(zeta);
    }
    // omega_1 has a kink wherever r switches
    const auto ftw = testsupport::filter_cubic(loop.filter_chain().model(), tw, tr.h,
                                               testsupport::square_wave_switches(sc));
    double err = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        err = std::max(err, std::abs(tz[k] - ftw[k] - tr.echi[k]));
    }
    EXPECT_LE(err, 1e-8);
}

TEST(HighUnknown, ZeroAugmentedErrorFreezesParameters) {
    auto sc = testsupport::family_scenario(Family::crm_high_unknown);
    const auto loop = sim::build_closed_loop(sc);
    const RegressorState s{vec({0.4}), vec({-0.1})};
    AugmentedState aug{Matrix::Constant(1, 4, 0.3), Vector::Constant(1, 0.2), Vector::Zero(2)};
    const auto o = ctrl_highrel_unknown(loop.regressor_filter(), loop.filter_chain(), loop.wf_model(), s, aug,
                                        vec({1.0, 2.0, 3.0, 4.0}), 0.5, 1.0, 1.0, 0.3, 5.0, -1.0);
    EXPECT_EQ(o.signals.ea, 0.0);
    EXPECT_EQ(o.dtheta, Vector::Zero(4));
    EXPECT_EQ(o.dkchi, 0.0);
}

TEST(HighUnknown, IdealParametersKeepAugmentedErrorAtZero) {
    auto sc = testsupport::matched(testsupport::family_scenario(Family::crm_high_unknown), 30.0);
    sc.gamma = 0.0;
    sc.kchi0 = sc.plant.gain();
    const auto tr = sim::simulate(sc);
    EXPECT_LE(testsupport::sup_abs(tr.ea), 1e-8);
    EXPECT_LE(testsupport::sup_abs(tr.ey), 1e-8);
}

TEST(HighUnknown, MirroredGainGivesSameOutputError) {
    auto base = testsupport::family_scenario(Family::crm_high_unknown);
    base.T = 40.0;
    base = testsupport::offset_from_match(base, 1, 0.5);
    base.kchi0 = 0.7;
    auto mirror = base;
    mirror.plant = base.plant.scaled(-1.0);
    // u -> -u flips omega_1 as well, so the theta_1 block keeps its sign
    const Eigen::Index d = (base.theta0.values.size() - 2) / 2;
    Vector flip = -Vector::Ones(base.theta0.values.size());
    flip.segment(1, d).setOnes();
    mirror.theta0.values = flip.cwiseProduct(base.theta0.values);
    mirror.kchi0 = -base.kchi0;
    const auto a = sim::simulate(base);
    const auto b = sim::simulate(mirror);
    ASSERT_EQ(a.size(), b.size());
    double err = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        err = std::max(err, std::abs(a.ey[k] - b.ey[k]));
    }
    EXPECT_LE(err, 1e-9);
    // mirrored ideal parameters
    EXPECT_LE((sim::build_closed_loop(mirror).theta_star() -
               flip.cwiseProduct(sim::build_closed_loop(base).theta_star()))
                  .norm(),
              1e-12);
}

TEST(Families, NamesRoundTrip) {
    for (Family f : testsupport::all_families()) {
        EXPECT_EQ(parse_family(family_name(f)), f);
    }
    EXPECT_FALSE(parse_family("mrac").has_value());
    EXPECT_EQ(required_relative_degree(Family::crm_n2), 2);
    EXPECT_TRUE(is_augmented(Family::crm_high_unknown));
    EXPECT_FALSE(is_augmented(Family::crm_n1));
}

}  // namespace
