#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crmadapt/controllers/controllers.hpp"
#include "crmadapt/lintf/transfer.hpp"
#include "crmadapt/matching/matching.hpp"
#include "crmadapt/realize/realize.hpp"
#include "crmadapt/sim/signal.hpp"
#include "crmadapt/state_space.hpp"

namespace crmadapt::sim {

using controllers::Family;
using lintf::Polynomial;
using lintf::RationalTransfer;

struct ThetaInit {
    enum class Kind { zeros, random, matched, values };
    Kind kind = Kind::zeros;
    Vector values;
};

struct Scenario {
    RationalTransfer plant{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
    RationalTransfer reference{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
    Vector ell;  // empty means zero
    Family family = Family::crm_n1;
    double gamma = 1.0;
    double filter_a = 1.0;          // crm_n2
    std::vector<double> filter_f;   // augmented families; empty means all ones
    std::optional<Polynomial> lambda0;
    SignalSpec signal;
    double T = 50.0;
    double h = 1e-3;
    ThetaInit theta0;
    std::uint64_t seed = 0;
    double kchi0 = 0.0;
    Vector plant_x0;      // empty means zero
    Vector reference_x0;  // empty means zero
};

struct Block {
    std::string name;
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
};

struct StateLayout {
    Block plant{"plant"};
    Block reference{"reference"};
    Block omega1{"omega1"};
    Block omega2{"omega2"};
    Block theta{"theta"};
    Block kchi{"kchi"};
    Block zeta{"zeta"};
    Block echi{"echi_filter"};
    Block ea{"ea_filter"};
    Block em_monitor{"em_monitor"};
    Block rec_monitor{"reconstruction_monitor"};
    // running integrals of e_y^2, e_a^2 and |theta'|^2
    Block integrals{"integrals"};
    Eigen::Index total = 0;

    // Dynamic blocks checked by the divergence guard (integrals excluded).
    std::vector<const Block*> blocks() const;
};

// Signals evaluated alongside a derivative call.
struct LoopSignals {
    double r = 0.0;
    double y = 0.0;
    double ym = 0.0;
    double ey = 0.0;
    double u = 0.0;
    double theta_norm = 0.0;
    double thetadot_norm = 0.0;
    double omega_bar_norm = 0.0;
    double ea = 0.0;
    double echi = 0.0;
    double kchi = 0.0;
    // e_a minus the monitor realization of W'_f driven by the parameter errors
    double reconstruction_error = 0.0;
};

// The assembled closed loop: plant realization, reference model, regressor
// filters, adaptive law and augmented-error machinery on one state vector.
class ClosedLoop {
public:
    const Scenario& scenario() const noexcept { return sc_; }
    const StateLayout& layout() const noexcept { return layout_; }
    const StateSpaceModel& plant_model() const noexcept { return plant_ss_; }
    const realize::ReferenceModel& reference_model() const noexcept { return ref_; }
    const realize::RegressorFilter& regressor_filter() const noexcept { return filter_; }
    const controllers::FilterChain& filter_chain() const noexcept { return F_; }
    // Realization of W'_f (augmented families only).
    const StateSpaceModel& wf_model() const noexcept { return wf_; }
    // W'_e = Z_m / (P_m - k_ell Z_ell)
    const RationalTransfer& we_prime() const noexcept { return we_prime_; }
    // W'_f = W'_e / F (augmented families only, equal to W'_e otherwise)
    const RationalTransfer& wf_prime() const noexcept { return wf_prime_; }
    const matching::MatchedParameters& matched() const noexcept { return matched_; }
    // theta* in the layout of the family's adaptive vector
    const Vector& theta_star() const noexcept { return theta_star_; }
    double kp() const noexcept { return plant_.gain(); }
    double sign_kp() const noexcept { return plant_.gain() > 0.0 ? 1.0 : -1.0; }
    std::size_t steps() const noexcept { return steps_; }

    Vector initial_state() const;
    // Reference command for a stage at time t inside the step starting at
    // step_start. Piecewise-constant signals are held at their mid-step value
    // so every step integrates a smooth vector field.
    double reference(double t, double step_start) const;
    void derivative(double t, const Vector& x, Vector& dx, LoopSignals* signals = nullptr) const {
        derivative(t, t, x, dx, signals);
    }
    void derivative(double t, double step_start, const Vector& x, Vector& dx,
                    LoopSignals* signals = nullptr) const;

private:
    friend ClosedLoop build_closed_loop(const Scenario& sc);

    Scenario sc_;
    RationalTransfer plant_{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
    StateLayout layout_;
    StateSpaceModel plant_ss_;
    double input_scale_ = 1.0;
    realize::ReferenceModel ref_;
    realize::RegressorFilter filter_;
    controllers::FilterChain F_;
    StateSpaceModel wf_;
    RationalTransfer we_prime_{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
    RationalTransfer wf_prime_{1.0, Polynomial{1.0}, Polynomial{1.0, 1.0}};
    matching::MatchedParameters matched_;
    Vector theta_star_;
    Vector em_input_;  // b_m k_p for the e_m monitor
    Matrix a_ell_;
    std::size_t steps_ = 0;
};

// Validates the scenario (throws ConfigError for malformed values and
// PreconditionError naming the failed certificate) and assembles the loop.
// Certificates: "minimum_phase", "relative_degree", "reference_model",
// "hurwitz_We", "spr_We", "spr_We_A", "spr_Wf", "coprime".
ClosedLoop build_closed_loop(const Scenario& sc);

// Scenario with every default filled in (ell, filter poles, ICs, numeric theta0).
Scenario resolve(const Scenario& sc);

}  // namespace crmadapt::sim
