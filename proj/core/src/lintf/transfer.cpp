#include "crmadapt/lintf/transfer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace crmadapt::lintf {

RationalTransfer::RationalTransfer(double gain, Polynomial numerator, Polynomial denominator)
    : gain_(gain), num_(std::move(numerator)), den_(std::move(denominator)) {
    if (!std::isfinite(gain_) || !num_.all_finite() || !den_.all_finite()) {
        throw std::invalid_argument("transfer function with non-finite coefficients");
    }
    if (num_.is_zero() || den_.is_zero()) {
        throw std::invalid_argument("degenerate transfer function");
    }
    if (!num_.is_monic() || !den_.is_monic()) {
        throw std::invalid_argument("transfer function numerator and denominator must be monic");
    }
    if (num_.degree() >= den_.degree()) {
        throw std::invalid_argument("transfer function must be strictly proper");
    }
}

RationalTransfer RationalTransfer::zero(Polynomial denominator) {
    return {0.0, Polynomial{1.0}, std::move(denominator)};
}

PrimeDecomposition prime_decompose(const Polynomial& numerator, const Polynomial& denominator) {
    if (numerator.is_zero() || denominator.is_zero()) {
        throw std::invalid_argument("degenerate transfer function");
    }
    relative_degree(numerator, denominator);
    const double k = numerator.leading() / denominator.leading();
    return {k, RationalTransfer(1.0, numerator.monic(), denominator.monic())};
}

int relative_degree(const Polynomial& numerator, const Polynomial& denominator) {
    if (denominator.is_zero()) {
        throw std::invalid_argument("degenerate transfer function");
    }
    const int rd = denominator.degree() - numerator.degree();
    if (!numerator.is_zero() && rd <= 0) {
        throw std::invalid_argument("improper transfer function (relative degree " +
                                    std::to_string(rd) + ")");
    }
    return rd;
}

double max_real_root(const Polynomial& p) {
    const RootSet rs = roots(p);
    if (rs.degenerate) {
        throw std::invalid_argument("max_real_root: zero polynomial");
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : rs.roots) {
        worst = std::max(worst, r.real());
    }
    return worst;
}

bool is_hurwitz(const Polynomial& p, double eps) { return max_real_root(p) < -eps; }

bool is_minimum_phase(const RationalTransfer& w, double eps) {
    if (w.is_zero()) {
        throw std::invalid_argument("degenerate transfer function");
    }
    return is_hurwitz(w.numerator(), eps);
}

RationalTransfer cancel_common_factors(const RationalTransfer& w, double tol) {
    if (w.is_zero()) {
        return w;
    }
    std::vector<std::complex<double>> zs = roots(w.numerator()).roots;
    std::vector<std::complex<double>> ps = roots(w.denominator()).roots;
    std::vector<std::complex<double>> keep_z;
    for (const auto& z : zs) {
        bool cancelled = false;
        for (auto it = ps.begin(); it != ps.end(); ++it) {
            if (std::abs(*it - z) <= tol * (1.0 + std::abs(z))) {
                ps.erase(it);
                cancelled = true;
                break;
            }
        }
        if (!cancelled) {
            keep_z.push_back(z);
        }
    }
    if (keep_z.size() == zs.size()) {
        return w;
    }
    return {w.gain(), Polynomial::from_roots(keep_z), Polynomial::from_roots(ps)};
}

RationalTransfer multiply(const RationalTransfer& a, const RationalTransfer& b) {
    return {a.gain() * b.gain(), a.numerator() * b.numerator(), a.denominator() * b.denominator()};
}

}  // namespace crmadapt::lintf
