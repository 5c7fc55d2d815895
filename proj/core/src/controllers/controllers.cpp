#include "crmadapt/controllers/controllers.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace crmadapt::controllers {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 5> kNames{{
    {Family::orm_n1, "orm_n1"},
    {Family::crm_n1, "crm_n1"},
    {Family::crm_n2, "crm_n2"},
    {Family::crm_high_known, "crm_high_known"},
    {Family::crm_high_unknown, "crm_high_unknown"},
}};

}  // namespace

std::string_view family_name(Family f) noexcept {
    for (const auto& [fam, name] : kNames) {
        if (fam == f) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
    for (const auto& [fam, n] : kNames) {
        if (n == name) {
            return fam;
        }
    }
    return std::nullopt;
}

int required_relative_degree(Family f) noexcept {
    switch (f) {
        case Family::orm_n1:
        case Family::crm_n1:
            return 1;
        case Family::crm_n2:
            return 2;
        default:
            return 0;
    }
}

bool is_augmented(Family f) noexcept {
    return f == Family::crm_high_known || f == Family::crm_high_unknown;
}

ReferenceStep reference_model_step(const realize::ReferenceModel& ref, const Vector& xm, double r,
                                   double y) {
    ReferenceStep out;
    out.ym = ref.cm.dot(xm);
    out.dx = ref.Am * xm + ref.bm * (ref.km * r) - ref.ell * (y - out.ym);
    return out;
}

Vector regressor(double r, const RegressorState& s, double y) {
    const Eigen::Index d = s.omega1.size();
    Vector w(2 * d + 2);
    w(0) = r;
    w.segment(1, d) = s.omega1;
    w(1 + d) = y;
    w.segment(2 + d, d) = s.omega2;
    return w;
}

Vector regressor_bar(const RegressorState& s, double y) {
    const Eigen::Index d = s.omega1.size();
    Vector w(2 * d + 1);
    w.head(d) = s.omega1;
    w(d) = y;
    w.tail(d) = s.omega2;
    return w;
}

RegressorState regressor_derivative(const realize::RegressorFilter& filter, const RegressorState& s,
                                    double u, double y) {
    return {filter.Lambda * s.omega1 + filter.b_lambda * u,
            filter.Lambda * s.omega2 + filter.b_lambda * y};
}

N1Output ctrl_n1(const realize::RegressorFilter& filter, const RegressorState& s, const Vector& theta,
                 double y, double ym, double r, double gamma, double sign_kp) {
    const Vector w = regressor(r, s, y);
    N1Output out;
    out.u = theta.dot(w);
    out.dtheta = (-gamma * sign_kp * (y - ym)) * w;
    out.dregressor = regressor_derivative(filter, s, out.u, y);
    return out;
}

N2Output ctrl_n2(const realize::RegressorFilter& filter, const RegressorState& s, const Vector& theta,
                 const Vector& zeta, double y, double ym, double r, double gamma, double sign_kp,
                 double a) {
    const Vector w = regressor(r, s, y);
    N2Output out;
    out.dtheta = (-gamma * sign_kp * (y - ym)) * zeta;
    out.u = out.dtheta.dot(zeta) + theta.dot(w);
    out.dregressor = regressor_derivative(filter, s, out.u, y);
    out.dzeta = -a * zeta + w;
    return out;
}

FilterChain::FilterChain(std::vector<double> poles) : poles_(std::move(poles)) {
    den_ = lintf::Polynomial::constant(1.0);
    for (double f : poles_) {
        if (!(f > 0.0)) {
            throw std::invalid_argument("filter poles f_i must be positive");
        }
        den_ = den_ * lintf::Polynomial{1.0, f};
    }
    if (poles_.empty()) {
        model_ = StateSpaceModel{Matrix(0, 0), Vector(0), Vector(0)};
    } else {
        model_ = realize::observer_canonical(
            lintf::RationalTransfer(1.0, lintf::Polynomial::constant(1.0), den_));
    }
}

double FilterChain::output(const Eigen::Ref<const Vector>& x, double input) const {
    return order() == 0 ? input : model_.c.dot(x);
}

Vector FilterChain::derivative(const Eigen::Ref<const Vector>& x, double input) const {
    if (order() == 0) {
        return Vector(0);
    }
    return model_.A * x + model_.b * input;
}

AugmentedSignals augmented_signals(const FilterChain& F, const StateSpaceModel& wf,
                                   const AugmentedState& s, const Vector& theta, const Vector& v,
                                   double ey) {
    AugmentedSignals out;
    out.zeta.resize(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        out.zeta(j) = F.output(s.zeta.col(j), v(j));
    }
    out.echi = theta.dot(out.zeta) - F.output(s.echi, theta.dot(v));
    out.ea = ey + wf.c.dot(s.ea);
    return out;
}

namespace {

AugmentedState augmented_derivative(const FilterChain& F, const StateSpaceModel& wf,
                                    const AugmentedState& s, const Vector& theta, const Vector& v,
                                    double drive) {
    AugmentedState d;
    d.zeta.resize(F.order(), v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        d.zeta.col(j) = F.derivative(s.zeta.col(j), v(j));
    }
    d.echi = F.derivative(s.echi, theta.dot(v));
    d.ea = wf.A * s.ea + wf.b * drive;
    return d;
}

}  // namespace

HighKnownOutput ctrl_highrel_known(const realize::RegressorFilter& filter, const FilterChain& F,
                                   const StateSpaceModel& wf, const RegressorState& s,
                                   const AugmentedState& aug, const Vector& theta_bar, double y,
                                   double ym, double r, double gamma) {
    const Vector wb = regressor_bar(s, y);
    HighKnownOutput out;
    out.signals = augmented_signals(F, wf, aug, theta_bar, wb, y - ym);
    const double ea = out.signals.ea;
    out.u = r + theta_bar.dot(wb);
    out.dtheta = (-gamma * ea) * out.signals.zeta;
    out.dregressor = regressor_derivative(filter, s, out.u, y);
    out.daug = augmented_derivative(F, wf, aug, theta_bar, wb,
                                    out.signals.echi - ea * out.signals.zeta.squaredNorm());
    return out;
}

HighUnknownOutput ctrl_highrel_unknown(const realize::RegressorFilter& filter, const FilterChain& F,
                                       const StateSpaceModel& wf, const RegressorState& s,
                                       const AugmentedState& aug, const Vector& theta, double kchi,
                                       double y, double ym, double r, double gamma, double sign_kp) {
    const Vector w = regressor(r, s, y);
    HighUnknownOutput out;
    out.signals = augmented_signals(F, wf, aug, theta, w, y - ym);
    const double ea = out.signals.ea;
    out.u = theta.dot(w);
    out.dtheta = (-gamma * sign_kp * ea) * out.signals.zeta;
    out.dkchi = -gamma * ea * out.signals.echi;
    out.dregressor = regressor_derivative(filter, s, out.u, y);
    out.daug = augmented_derivative(F, wf, aug, theta, w,
                                    kchi * out.signals.echi - ea * out.signals.zeta.squaredNorm());
    return out;
}

}  // namespace crmadapt::controllers
