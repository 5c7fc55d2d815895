#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "crmadapt/sim/scenario.hpp"

namespace crmadapt::sim {

constexpr double kDivergenceThreshold = 1e9;

using DerivativeFn = std::function<Vector(double, const Vector&)>;

// Classical fourth-order Runge-Kutta step. Throws DivergenceError("derivative")
// with the state snapshot in the message on a non-finite derivative.
Vector rk4_step(const DerivativeFn& f, const Vector& x, double t, double h);

struct SimOptions {
    // Keep the full state vector at every grid point (row-major in `states`).
    bool record_states = false;
};

struct SimTrace {
    Family family = Family::crm_n1;
    double h = 0.0;
    StateLayout layout;
    Vector theta_star;

    std::vector<double> t;
    std::vector<double> r;
    std::vector<double> y;
    std::vector<double> ym;
    std::vector<double> ey;
    std::vector<double> u;
    std::vector<double> theta_norm;
    std::vector<double> thetadot_norm;
    std::vector<double> omega_bar_norm;
    // augmented families
    std::vector<double> ea;
    std::vector<double> echi;
    std::vector<double> kchi;
    std::vector<double> reconstruction_error;

    // integrals over the whole horizon, carried as integrator states
    double int_ey2 = 0.0;
    double int_ea2 = 0.0;
    double int_thetadot2 = 0.0;

    std::vector<double> states;

    std::size_t size() const noexcept { return t.size(); }
    bool augmented() const noexcept { return controllers::is_augmented(family); }
    bool has_kchi() const noexcept { return family == Family::crm_high_unknown; }
    // Block `b` of the recorded state at grid index k.
    Vector state_block(std::size_t k, const Block& b) const;
};

// Integrates the closed loop on t_k = k h, k = 0..T/h. Throws DivergenceError
// naming the first state block whose norm exceeds kDivergenceThreshold.
SimTrace simulate(const ClosedLoop& loop, const SimOptions& options = {});
SimTrace simulate(const Scenario& sc, const SimOptions& options = {});

// Header t,r,y,ym,ey,u,theta_norm[,ea,echi[,kchi]]; values at 17 significant digits.
void write_csv(const SimTrace& trace, std::ostream& os);

}  // namespace crmadapt::sim
