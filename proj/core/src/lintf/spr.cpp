#include "crmadapt/lintf/spr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crmadapt::lintf {

namespace {

double real_part_at(const RationalTransfer& w, double omega) {
    return w(std::complex<double>(0.0, omega)).real();
}

double weighted_real_part(const RationalTransfer& w, double omega) {
    return (1.0 + omega * omega) * real_part_at(w, omega);
}

// Golden-section minimization of (1 + w^2) Re W(j w) over log w in [lo, hi].
std::pair<double, double> refine_minimum(const RationalTransfer& w, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = std::log(lo);
    double b = std::log(hi);
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = weighted_real_part(w, std::exp(x1));
    double f2 = weighted_real_part(w, std::exp(x2));
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = weighted_real_part(w, std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = weighted_real_part(w, std::exp(x2));
        }
    }
    return f1 < f2 ? std::pair{std::exp(x1), f1} : std::pair{std::exp(x2), f2};
}

}  // namespace

SprCertificate is_spr(const RationalTransfer& w, const FrequencyGrid& grid) {
    if (grid.points < 2 || !(grid.omega_min > 0.0) || !(grid.omega_max > grid.omega_min)) {
        throw std::invalid_argument("is_spr: invalid frequency grid");
    }
    SprCertificate cert;
    cert.grid_size = grid.points;
    cert.hurwitz_margin = max_real_root(w.denominator());

    const double ratio = grid.omega_max / grid.omega_min;
    double best = std::numeric_limits<double>::infinity();
    int best_index = 0;
    for (int i = 0; i < grid.points; ++i) {
        const double omega =
            grid.omega_min * std::pow(ratio, static_cast<double>(i) / (grid.points - 1));
        const double re = weighted_real_part(w, omega);
        if (re < best) {
            best = re;
            best_index = i;
        }
    }
    const auto omega_at = [&](int i) {
        return grid.omega_min * std::pow(ratio, static_cast<double>(i) / (grid.points - 1));
    };
    const double lo = omega_at(std::max(0, best_index - 1));
    const double hi = omega_at(std::min(grid.points - 1, best_index + 1));
    const auto [omega_star, refined] = refine_minimum(w, lo, hi);
    cert.argmin_omega = omega_at(best_index);
    cert.min_real_part_margin = best;
    if (refined < best) {
        cert.min_real_part_margin = refined;
        cert.argmin_omega = omega_star;
    }
    // DC value is part of the frequency axis as well.
    const double dc = real_part_at(w, 0.0);
    if (dc < cert.min_real_part_margin) {
        cert.min_real_part_margin = dc;
        cert.argmin_omega = 0.0;
    }
    cert.limit_check = grid.omega_max * grid.omega_max * real_part_at(w, grid.omega_max);

    if (w.relative_degree() > 1) {
        cert.reason = "relative degree " + std::to_string(w.relative_degree()) + " exceeds 1";
        return cert;
    }
    if (!(cert.hurwitz_margin < -kHurwitzEps)) {
        cert.reason = "denominator is not Hurwitz";
        return cert;
    }
    // A positive but vanishing tail is reported as the limit failure it is.
    if (!(cert.limit_check > kSprEps) && cert.min_real_part_margin >= 0.0) {
        cert.reason = "w^2 Re W(jw) vanishes at high frequency";
        return cert;
    }
    if (!(cert.min_real_part_margin > kSprEps)) {
        cert.reason = "Re W(jw) is not positive on the frequency axis";
        return cert;
    }
    if (!(cert.limit_check > kSprEps)) {
        cert.reason = "w^2 Re W(jw) vanishes at high frequency";
        return cert;
    }
    cert.verdict = true;
    cert.reason = "ok";
    return cert;
}

double decay_rate_mu(const Polynomial& den) {
    const RootSet rs = roots(den);
    if (rs.degenerate || rs.roots.empty()) {
        throw std::domain_error("mu undefined: constant characteristic polynomial");
    }
    double mu = std::numeric_limits<double>::infinity();
    for (const auto& r : rs.roots) {
        if (!(r.real() < -kHurwitzEps)) {
            throw std::domain_error("mu undefined: characteristic polynomial is not Hurwitz");
        }
        mu = std::min(mu, -r.real());
    }
    return mu;
}

}  // namespace crmadapt::lintf
