#include "crmadapt/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "crmadapt/errors.hpp"
#include "crmadapt/lintf/spr.hpp"

namespace crmadapt::sim {

using controllers::AugmentedState;
using controllers::RegressorState;

std::vector<const Block*> StateLayout::blocks() const {
    return {&plant, &reference, &omega1, &omega2, &theta, &kchi,
            &zeta,  &echi,      &ea,     &em_monitor, &rec_monitor};
}

namespace {

void place(Block& b, Eigen::Index size, Eigen::Index& cursor) {
    b.offset = cursor;
    b.size = size;
    cursor += size;
}

std::string describe(const RationalTransfer& w) {
    std::string s = "k=" + std::to_string(w.gain()) + " num=[";
    for (double c : w.numerator().coefficients()) {
        s += std::to_string(c) + " ";
    }
    s += "] den=[";
    for (double c : w.denominator().coefficients()) {
        s += std::to_string(c) + " ";
    }
    return s + "]";
}

void require_spr(const RationalTransfer& w, const std::string& certificate) {
    const auto cert = lintf::is_spr(w);
    if (!cert.verdict) {
        throw PreconditionError(certificate, describe(w) + " is not SPR" +
                                                 (cert.reason.empty() ? "" : " (" + cert.reason + ")"));
    }
}

}  // namespace

ClosedLoop build_closed_loop(const Scenario& input) {
    ClosedLoop cl;
    Scenario sc = input;

    if (!(sc.T > 0.0) || !std::isfinite(sc.T)) {
        throw ConfigError("T", "horizon must be positive");
    }
    if (!(sc.h > 0.0) || !std::isfinite(sc.h)) {
        throw ConfigError("h", "step must be positive");
    }
    const double ratio = sc.T / sc.h;
    const double steps = std::round(ratio);
    if (std::abs(ratio - steps) > 1e-9 * ratio || steps < 1.0) {
        throw ConfigError("h", "T must be an integer multiple of h");
    }
    cl.steps_ = static_cast<std::size_t>(steps);
    if (!(sc.gamma >= 0.0) || !std::isfinite(sc.gamma)) {
        throw ConfigError("gamma", "adaptation gain must be finite and non-negative");
    }
    if (sc.signal.type == SignalSpec::Type::square && !(sc.signal.period > 0.0)) {
        throw ConfigError("signal.period", "square wave period must be positive");
    }

    const RationalTransfer& plant = sc.plant;
    const int n = plant.denominator().degree();
    const int nstar = plant.relative_degree();
    if (!lintf::is_minimum_phase(plant)) {
        throw PreconditionError("minimum_phase", "plant zeros must lie in Re s < 0");
    }
    if (!lintf::is_hurwitz(sc.reference.denominator())) {
        throw PreconditionError("reference_model", "reference model must be stable");
    }
    if (!lintf::is_minimum_phase(sc.reference)) {
        throw PreconditionError("reference_model", "reference model must be minimum phase");
    }
    if (sc.reference.relative_degree() != nstar) {
        throw PreconditionError("relative_degree",
                                "reference model relative degree " +
                                    std::to_string(sc.reference.relative_degree()) +
                                    " differs from plant relative degree " + std::to_string(nstar));
    }
    const int required = controllers::required_relative_degree(sc.family);
    if (required != 0 && required != nstar) {
        throw PreconditionError("relative_degree",
                                std::string(controllers::family_name(sc.family)) +
                                    " requires relative degree " + std::to_string(required) +
                                    ", plant has " + std::to_string(nstar));
    }

    const int m = sc.reference.denominator().degree();
    if (sc.ell.size() == 0) {
        sc.ell = Vector::Zero(m);
    }
    if (sc.ell.size() != m) {
        throw ConfigError("ell", "expected " + std::to_string(m) + " entries, got " +
                                     std::to_string(sc.ell.size()));
    }
    if (!sc.ell.allFinite()) {
        throw ConfigError("ell", "entries must be finite");
    }
    if (sc.family == Family::orm_n1 && !sc.ell.isZero(0.0)) {
        throw ConfigError("ell", "orm_n1 requires ell = 0");
    }

    const bool known = sc.family == Family::crm_high_known;
    const bool unknown = sc.family == Family::crm_high_unknown;
    const bool augmented = known || unknown;
    const RationalTransfer wm = known ? sc.reference.prime() : sc.reference;

    // A cancelling pole/zero pair in W_m would survive as an extra mode of the
    // observer-form reference and break the error model.
    for (const auto& z : lintf::roots(wm.numerator()).roots) {
        for (const auto& p : lintf::roots(wm.denominator()).roots) {
            if (std::abs(z - p) <= 1e-8 * std::max(1.0, std::abs(p))) {
                throw PreconditionError("coprime", "reference numerator and denominator share a root");
            }
        }
    }

    const auto err = realize::crm_error_tf(wm, sc.ell);
    if (!err.hurwitz) {
        throw PreconditionError("hurwitz_We", "P_m - k_ell Z_ell is not Hurwitz for the given ell");
    }
    cl.we_prime_ = err.we.prime();
    cl.wf_prime_ = cl.we_prime_;

    if (sc.family == Family::crm_n2) {
        if (!(sc.filter_a > 0.0) || !std::isfinite(sc.filter_a)) {
            throw ConfigError("filter.a", "filter pole must be positive");
        }
        const RationalTransfer wa(1.0, cl.we_prime_.numerator() * Polynomial{1.0, sc.filter_a},
                                  cl.we_prime_.denominator());
        require_spr(wa, "spr_We_A");
    } else if (augmented) {
        if (sc.filter_f.empty()) {
            sc.filter_f.assign(static_cast<std::size_t>(nstar - 1), 1.0);
        }
        if (static_cast<int>(sc.filter_f.size()) != nstar - 1) {
            throw ConfigError("filter.f", "expected " + std::to_string(nstar - 1) +
                                              " filter poles (relative degree minus one), got " +
                                              std::to_string(sc.filter_f.size()));
        }
        try {
            cl.F_ = controllers::FilterChain(sc.filter_f);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("filter.f", e.what());
        }
        cl.wf_prime_ = RationalTransfer(1.0, cl.we_prime_.numerator() * cl.F_.denominator(),
                                        cl.we_prime_.denominator());
        require_spr(cl.wf_prime_, "spr_Wf");
        cl.wf_ = realize::observer_canonical(cl.wf_prime_);
    } else {
        require_spr(cl.we_prime_, "spr_We");
    }

    // Matching is carried out on the normalized pair for the known-k_p family.
    const RationalTransfer match_plant = known ? plant.prime() : plant;
    Polynomial lambda;
    try {
        lambda = matching::filter_polynomial(match_plant, wm, sc.lambda0);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("lambda0", e.what());
    }
    cl.filter_ = realize::make_regressor_filter(lambda);
    try {
        cl.matched_ = matching::bezout_match(match_plant, wm, cl.filter_.Lambda, cl.filter_.b_lambda);
    } catch (const std::invalid_argument& e) {
        throw PreconditionError("coprime", e.what());
    }
    cl.theta_star_ = known ? cl.matched_.bar() : cl.matched_.full();
    const Eigen::Index ntheta = cl.theta_star_.size();

    switch (sc.theta0.kind) {
        case ThetaInit::Kind::zeros:
            sc.theta0.values = Vector::Zero(ntheta);
            break;
        case ThetaInit::Kind::matched:
            sc.theta0.values = cl.theta_star_;
            break;
        case ThetaInit::Kind::random: {
            std::mt19937_64 gen(sc.seed);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            sc.theta0.values.resize(ntheta);
            for (Eigen::Index i = 0; i < ntheta; ++i) {
                sc.theta0.values(i) = dist(gen);
            }
            break;
        }
        case ThetaInit::Kind::values:
            if (sc.theta0.values.size() != ntheta) {
                throw ConfigError("theta0", "expected " + std::to_string(ntheta) + " entries, got " +
                                                std::to_string(sc.theta0.values.size()));
            }
            if (!sc.theta0.values.allFinite()) {
                throw ConfigError("theta0", "entries must be finite");
            }
            break;
    }
    sc.theta0.kind = ThetaInit::Kind::values;

    if (sc.plant_x0.size() == 0) {
        sc.plant_x0 = Vector::Zero(n);
    }
    if (sc.plant_x0.size() != n) {
        throw ConfigError("plant_x0", "expected " + std::to_string(n) + " entries");
    }
    if (sc.reference_x0.size() == 0) {
        sc.reference_x0 = Vector::Zero(m);
    }
    if (sc.reference_x0.size() != m) {
        throw ConfigError("reference_x0", "expected " + std::to_string(m) + " entries");
    }
    if (!std::isfinite(sc.kchi0)) {
        throw ConfigError("kchi0", "must be finite");
    }

    cl.plant_ = plant;
    cl.plant_ss_ = realize::observer_canonical(plant);
    cl.input_scale_ = known ? 1.0 / plant.gain() : 1.0;
    cl.ref_ = realize::make_reference_model(wm, sc.ell);
    cl.a_ell_ = cl.ref_.error_matrix();
    cl.em_input_ = cl.ref_.bm * plant.gain();

    const Eigen::Index d = n - 1;
    const Eigen::Index q = cl.F_.order();
    const Eigen::Index nreg = known ? 2 * n - 1 : 2 * n;
    StateLayout& L = cl.layout_;
    Eigen::Index cursor = 0;
    place(L.plant, n, cursor);
    place(L.reference, m, cursor);
    place(L.omega1, d, cursor);
    place(L.omega2, d, cursor);
    place(L.theta, ntheta, cursor);
    place(L.kchi, unknown ? 1 : 0, cursor);
    place(L.zeta, sc.family == Family::crm_n2 ? 2 * n : (augmented ? q * nreg : 0), cursor);
    place(L.echi, augmented ? q : 0, cursor);
    place(L.ea, augmented ? cl.wf_.order() : 0, cursor);
    const bool n1 = sc.family == Family::orm_n1 || sc.family == Family::crm_n1;
    place(L.em_monitor, n1 ? m : 0, cursor);
    place(L.rec_monitor, augmented ? cl.wf_.order() : 0, cursor);
    place(L.integrals, 3, cursor);
    L.total = cursor;

    cl.sc_ = std::move(sc);
    return cl;
}

Scenario resolve(const Scenario& sc) { return build_closed_loop(sc).scenario(); }

Vector ClosedLoop::initial_state() const {
    Vector x = Vector::Zero(layout_.total);
    x.segment(layout_.plant.offset, layout_.plant.size) = sc_.plant_x0;
    x.segment(layout_.reference.offset, layout_.reference.size) = sc_.reference_x0;
    x.segment(layout_.theta.offset, layout_.theta.size) = sc_.theta0.values;
    if (layout_.kchi.size == 1) {
        x(layout_.kchi.offset) = sc_.kchi0;
    }
    return x;
}

namespace {

Vector seg(const Vector& x, const Block& b) { return x.segment(b.offset, b.size); }

AugmentedState aug_state(const Vector& x, const StateLayout& L, Eigen::Index q, Eigen::Index nreg) {
    AugmentedState s;
    s.zeta = Eigen::Map<const Matrix>(x.data() + L.zeta.offset, q, nreg);
    s.echi = seg(x, L.echi);
    s.ea = seg(x, L.ea);
    return s;
}

void put_aug(Vector& dx, const StateLayout& L, const AugmentedState& d) {
    Eigen::Map<Matrix>(dx.data() + L.zeta.offset, d.zeta.rows(), d.zeta.cols()) = d.zeta;
    dx.segment(L.echi.offset, L.echi.size) = d.echi;
    dx.segment(L.ea.offset, L.ea.size) = d.ea;
}

}  // namespace

double ClosedLoop::reference(double t, double step_start) const {
    switch (sc_.signal.type) {
        case SignalSpec::Type::step:
        case SignalSpec::Type::square:
            return evaluate(sc_.signal, step_start + 0.5 * sc_.h);
        default:
            return evaluate(sc_.signal, t);
    }
}

void ClosedLoop::derivative(double t, double step_start, const Vector& x, Vector& dx,
                            LoopSignals* signals) const {
    const StateLayout& L = layout_;
    dx.setZero(L.total);

    const Vector xp = seg(x, L.plant);
    const Vector xm = seg(x, L.reference);
    const RegressorState reg{seg(x, L.omega1), seg(x, L.omega2)};
    const Vector theta = seg(x, L.theta);

    const double r = reference(t, step_start);
    const double y = plant_ss_.c.dot(xp);
    const auto refstep = controllers::reference_model_step(ref_, xm, r, y);
    const double ym = refstep.ym;

    LoopSignals s;
    s.r = r;
    s.y = y;
    s.ym = ym;
    s.ey = y - ym;
    s.theta_norm = theta.norm();
    s.omega_bar_norm = controllers::regressor_bar(reg, y).norm();

    double u = 0.0;
    Vector dtheta;
    RegressorState dreg;
    switch (sc_.family) {
        case Family::orm_n1:
        case Family::crm_n1: {
            auto out = controllers::ctrl_n1(filter_, reg, theta, y, ym, r, sc_.gamma, sign_kp());
            u = out.u;
            dtheta = std::move(out.dtheta);
            dreg = std::move(out.dregressor);
            const Vector phi = theta - theta_star_;
            const Vector em = seg(x, L.em_monitor);
            dx.segment(L.em_monitor.offset, L.em_monitor.size) =
                a_ell_ * em + em_input_ * phi.dot(controllers::regressor(r, reg, y));
            break;
        }
        case Family::crm_n2: {
            const Vector zeta = seg(x, L.zeta);
            auto out = controllers::ctrl_n2(filter_, reg, theta, zeta, y, ym, r, sc_.gamma, sign_kp(),
                                            sc_.filter_a);
            u = out.u;
            dtheta = std::move(out.dtheta);
            dreg = std::move(out.dregressor);
            dx.segment(L.zeta.offset, L.zeta.size) = out.dzeta;
            break;
        }
        case Family::crm_high_known: {
            const AugmentedState aug = aug_state(x, L, F_.order(), theta.size());
            auto out = controllers::ctrl_highrel_known(filter_, F_, wf_, reg, aug, theta, y, ym, r,
                                                       sc_.gamma);
            u = out.u;
            dtheta = std::move(out.dtheta);
            dreg = std::move(out.dregressor);
            put_aug(dx, L, out.daug);
            s.ea = out.signals.ea;
            s.echi = out.signals.echi;
            const Vector phi = theta - theta_star_;
            const Vector xr = seg(x, L.rec_monitor);
            const double drive = phi.dot(out.signals.zeta) - s.ea * out.signals.zeta.squaredNorm();
            dx.segment(L.rec_monitor.offset, L.rec_monitor.size) = wf_.A * xr + wf_.b * drive;
            s.reconstruction_error = s.ea - wf_.c.dot(xr);
            break;
        }
        case Family::crm_high_unknown: {
            const AugmentedState aug = aug_state(x, L, F_.order(), theta.size());
            const double kchi = x(L.kchi.offset);
            auto out = controllers::ctrl_highrel_unknown(filter_, F_, wf_, reg, aug, theta, kchi, y, ym,
                                                         r, sc_.gamma, sign_kp());
            u = out.u;
            dtheta = std::move(out.dtheta);
            dreg = std::move(out.dregressor);
            put_aug(dx, L, out.daug);
            dx(L.kchi.offset) = out.dkchi;
            s.ea = out.signals.ea;
            s.echi = out.signals.echi;
            s.kchi = kchi;
            const Vector phi = theta - theta_star_;
            const Vector xr = seg(x, L.rec_monitor);
            const double drive = kp() * phi.dot(out.signals.zeta) + (kchi - kp()) * s.echi -
                                 s.ea * out.signals.zeta.squaredNorm();
            dx.segment(L.rec_monitor.offset, L.rec_monitor.size) = wf_.A * xr + wf_.b * drive;
            s.reconstruction_error = s.ea - wf_.c.dot(xr);
            break;
        }
    }

    dx.segment(L.plant.offset, L.plant.size) = plant_ss_.A * xp + plant_ss_.b * (u * input_scale_);
    dx.segment(L.reference.offset, L.reference.size) = refstep.dx;
    dx.segment(L.omega1.offset, L.omega1.size) = dreg.omega1;
    dx.segment(L.omega2.offset, L.omega2.size) = dreg.omega2;
    dx.segment(L.theta.offset, L.theta.size) = dtheta;

    const double td2 = dtheta.squaredNorm();
    dx(L.integrals.offset) = s.ey * s.ey;
    dx(L.integrals.offset + 1) = s.ea * s.ea;
    dx(L.integrals.offset + 2) = td2;

    if (signals != nullptr) {
        s.u = u;
        s.thetadot_norm = std::sqrt(td2);
        *signals = s;
    }
}

}  // namespace crmadapt::sim
