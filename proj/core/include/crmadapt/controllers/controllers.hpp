#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "crmadapt/lintf/transfer.hpp"
#include "crmadapt/realize/realize.hpp"
#include "crmadapt/state_space.hpp"

namespace crmadapt::controllers {

enum class Family { orm_n1, crm_n1, crm_n2, crm_high_known, crm_high_unknown };

std::string_view family_name(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;
// 1 or 2 for the fixed-structure laws, 0 when any relative degree is accepted.
int required_relative_degree(Family f) noexcept;
bool is_augmented(Family f) noexcept;

struct ReferenceStep {
    Vector dx;
    double ym = 0.0;
};
// x_m' = A_m x_m + b_m k_m r - ell (y - y_m)
ReferenceStep reference_model_step(const realize::ReferenceModel& ref, const Vector& xm, double r,
                                   double y);

struct RegressorState {
    Vector omega1;
    Vector omega2;
};

// omega = [r, omega_1, y, omega_2]
Vector regressor(double r, const RegressorState& s, double y);
// omega_bar = [omega_1, y, omega_2]
Vector regressor_bar(const RegressorState& s, double y);
// omega_1' = Lambda omega_1 + b_lambda u, omega_2' = Lambda omega_2 + b_lambda y
RegressorState regressor_derivative(const realize::RegressorFilter& filter, const RegressorState& s,
                                    double u, double y);

struct N1Output {
    double u = 0.0;
    Vector dtheta;
    RegressorState dregressor;
};
// u = theta^T omega, theta' = -gamma sgn(k_p) e_y omega
N1Output ctrl_n1(const realize::RegressorFilter& filter, const RegressorState& s, const Vector& theta,
                 double y, double ym, double r, double gamma, double sign_kp);

struct N2Output {
    double u = 0.0;
    Vector dtheta;
    RegressorState dregressor;
    Vector dzeta;
};
// theta' = -gamma sgn(k_p) e_y zeta, u = theta'^T zeta + theta^T omega,
// zeta' = -a zeta + omega
N2Output ctrl_n2(const realize::RegressorFilter& filter, const RegressorState& s, const Vector& theta,
                 const Vector& zeta, double y, double ym, double r, double gamma, double sign_kp,
                 double a);

// F(s) = 1 / prod_i (s + f_i) in observer canonical form. With no poles F = 1
// and the chain has no state.
class FilterChain {
public:
    FilterChain() : FilterChain(std::vector<double>{}) {}
    explicit FilterChain(std::vector<double> poles);

    Eigen::Index order() const noexcept { return model_.order(); }
    const std::vector<double>& poles() const noexcept { return poles_; }
    const StateSpaceModel& model() const noexcept { return model_; }
    const lintf::Polynomial& denominator() const noexcept { return den_; }

    double output(const Eigen::Ref<const Vector>& x, double input) const;
    Vector derivative(const Eigen::Ref<const Vector>& x, double input) const;

private:
    std::vector<double> poles_;
    lintf::Polynomial den_;
    StateSpaceModel model_;
};

// One chain per regressor entry (columns), the F(theta^T omega) chain and the
// state realizing W'_f.
struct AugmentedState {
    Matrix zeta;
    Vector echi;
    Vector ea;
};

struct AugmentedSignals {
    Vector zeta;
    double ea = 0.0;
    double echi = 0.0;
};

// zeta = F(s) I v and e_chi = theta^T zeta - F(s)(theta^T v) for the filtered
// regressor v; e_a = e_y + c_f^T x_a.
AugmentedSignals augmented_signals(const FilterChain& F, const StateSpaceModel& wf,
                                   const AugmentedState& s, const Vector& theta, const Vector& v,
                                   double ey);

struct HighKnownOutput {
    double u = 0.0;
    Vector dtheta;
    RegressorState dregressor;
    AugmentedState daug;
    AugmentedSignals signals;
};
// Normalized plant (k_p = k_m = 1): u = r + theta_bar^T omega_bar,
// x_a' = A_f x_a + b_f (e_chi - e_a |zeta_bar|^2), theta_bar' = -gamma e_a zeta_bar.
HighKnownOutput ctrl_highrel_known(const realize::RegressorFilter& filter, const FilterChain& F,
                                   const StateSpaceModel& wf, const RegressorState& s,
                                   const AugmentedState& aug, const Vector& theta_bar, double y,
                                   double ym, double r, double gamma);

struct HighUnknownOutput {
    double u = 0.0;
    Vector dtheta;
    double dkchi = 0.0;
    RegressorState dregressor;
    AugmentedState daug;
    AugmentedSignals signals;
};
// u = theta^T omega, x_a' = A_f x_a + b_f (k_chi e_chi - e_a |zeta|^2),
// theta' = -gamma sgn(k_p) e_a zeta, k_chi' = -gamma e_a e_chi.
HighUnknownOutput ctrl_highrel_unknown(const realize::RegressorFilter& filter, const FilterChain& F,
                                       const StateSpaceModel& wf, const RegressorState& s,
                                       const AugmentedState& aug, const Vector& theta, double kchi,
                                       double y, double ym, double r, double gamma, double sign_kp);

}  // namespace crmadapt::controllers
