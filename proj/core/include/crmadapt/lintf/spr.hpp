#pragma once

#include <string>

#include "crmadapt/lintf/transfer.hpp"

namespace crmadapt::lintf {

constexpr double kSprEps = 1e-9;

// Logarithmic frequency grid used by the SPR test.
struct FrequencyGrid {
    double omega_min = 1e-6;
    double omega_max = 1e6;
    int points = 4096;
};

struct SprCertificate {
    bool verdict = false;
    // min over the grid (refined locally around the grid minimizer) and DC of
    // (1 + w^2) Re W(jw); the weight keeps the 1/w^2 roll-off of a relative
    // degree one W from masking positivity at the top of the grid
    double min_real_part_margin = 0.0;
    double argmin_omega = 0.0;
    // max real part of the denominator roots
    double hurwitz_margin = 0.0;
    int grid_size = 0;
    // w^2 Re W(jw) at the top grid frequency; must stay positive for relative degree 1
    double limit_check = 0.0;
    std::string reason;
};

// Strict positive realness of W(s) including its gain.
SprCertificate is_spr(const RationalTransfer& w, const FrequencyGrid& grid = {});

// Exponential decay rate of a Hurwitz characteristic polynomial: min_i |Re lambda_i|.
// Throws std::domain_error("mu undefined") when `den` is not Hurwitz.
double decay_rate_mu(const Polynomial& den);

}  // namespace crmadapt::lintf
