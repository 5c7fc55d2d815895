#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace crmadapt::lintf {

// Real polynomial in s, coefficients stored highest degree first.
// Leading zeros are stripped on construction; the zero polynomial has no
// stored coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);
    Polynomial(std::initializer_list<double> coefficients);

    // prod (s - r_i). Roots must be closed under conjugation; the imaginary
    // residue of the expanded coefficients is discarded.
    static Polynomial from_roots(std::span<const std::complex<double>> roots);
    static Polynomial constant(double value);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.front() == 1.0; }
    double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.front(); }

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    // Coefficient of s^power (0 outside the stored range).
    double coefficient(int power) const noexcept;
    // Coefficients lowest degree first, zero padded to `length`.
    std::vector<double> ascending(std::size_t length) const;

    std::complex<double> operator()(std::complex<double> s) const noexcept;
    double operator()(double s) const noexcept;

    Polynomial monic() const;
    Polynomial derivative() const;
    bool all_finite() const noexcept;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double k, const Polynomial& p);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void normalize();

    std::vector<double> coeffs_;
};

struct PolynomialDivision {
    Polynomial quotient;
    Polynomial remainder;
};
PolynomialDivision divide(const Polynomial& numerator, const Polynomial& divisor);

// Largest absolute coefficient difference.
double max_coefficient_difference(const Polynomial& a, const Polynomial& b);

struct RootSet {
    std::vector<std::complex<double>> roots;
    // max_i |p(root_i)| after polishing
    double max_residual = 0.0;
    // Set when the zero polynomial was passed; `roots` is then empty.
    bool degenerate = false;
};

// Roots via eigenvalues of the companion matrix, followed by a guarded
// Newton polish. Constants have no roots.
RootSet roots(const Polynomial& p);

}  // namespace crmadapt::lintf
