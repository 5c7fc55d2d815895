#pragma once

#include <complex>

#include "crmadapt/lintf/polynomial.hpp"

namespace crmadapt::lintf {

constexpr double kHurwitzEps = 1e-9;

// k * N(s) / D(s) with N, D monic and deg N < deg D.
//
// A zero transfer function is represented with gain 0 and numerator 1 so the
// monic invariant still holds.
class RationalTransfer {
public:
    RationalTransfer(double gain, Polynomial numerator, Polynomial denominator);

    static RationalTransfer zero(Polynomial denominator);

    double gain() const noexcept { return gain_; }
    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return gain_ == 0.0; }
    int relative_degree() const noexcept { return den_.degree() - num_.degree(); }

    // W' = W / k
    RationalTransfer prime() const { return {1.0, num_, den_}; }
    RationalTransfer scaled(double k) const { return {gain_ * k, num_, den_}; }

    // gain * numerator, i.e. the raw numerator polynomial.
    Polynomial raw_numerator() const { return gain_ * num_; }

    std::complex<double> operator()(std::complex<double> s) const {
        return gain_ * num_(s) / den_(s);
    }

private:
    double gain_;
    Polynomial num_;
    Polynomial den_;
};

struct PrimeDecomposition {
    double k;
    RationalTransfer prime;
};

// Splits raw N(s)/D(s) into its high-frequency gain and the monic pair.
// Throws std::invalid_argument("degenerate transfer function") for N = 0 and
// for improper input.
PrimeDecomposition prime_decompose(const Polynomial& numerator, const Polynomial& denominator);

inline RationalTransfer make_transfer(const Polynomial& numerator, const Polynomial& denominator) {
    const auto d = prime_decompose(numerator, denominator);
    return d.prime.scaled(d.k);
}

// deg D - deg N; throws std::invalid_argument when deg N >= deg D.
int relative_degree(const Polynomial& numerator, const Polynomial& denominator);
inline int relative_degree(const RationalTransfer& w) { return w.relative_degree(); }

// Largest real part among the roots; -inf for a constant.
double max_real_root(const Polynomial& p);
bool is_hurwitz(const Polynomial& p, double eps = kHurwitzEps);

// All finite zeros strictly inside Re s < -eps. Constant numerators qualify.
bool is_minimum_phase(const RationalTransfer& w, double eps = kHurwitzEps);

// Removes pole/zero pairs closer than `tol` (relative to 1 + |root|).
RationalTransfer cancel_common_factors(const RationalTransfer& w, double tol = 1e-7);

// Product and scalar helpers used when composing error transfer functions.
RationalTransfer multiply(const RationalTransfer& a, const RationalTransfer& b);

}  // namespace crmadapt::lintf
