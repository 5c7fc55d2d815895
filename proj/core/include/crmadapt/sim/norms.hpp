#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crmadapt/state_space.hpp"

namespace crmadapt::sim {

// Composite trapezoidal integral of x^2 on a uniform grid of spacing h.
double integral_of_square(std::span<const double> x, double h);

// sqrt of the trapezoidal integral of x^2 over [0, up_to] (whole signal when
// absent; up_to is rounded down to the grid).
double l2_norm(std::span<const double> x, double h, std::optional<double> up_to = std::nullopt);

// Grid maximum of |x|.
double linf_norm(std::span<const double> x);

// Output of c^T (sI - A)^{-1} b driven by u sampled on a uniform grid, with the
// input treated as piecewise linear between samples (exact first-order-hold
// discretization), starting from rest.
std::vector<double> filter_foh(const StateSpaceModel& model, std::span<const double> u, double h);

}  // namespace crmadapt::sim
