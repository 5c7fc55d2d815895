#include "crmadapt/lintf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace crmadapt::lintf {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    normalize();
}

Polynomial::Polynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {
    normalize();
}

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= r * c[i];
        }
        c = std::move(next);
    }
    std::vector<double> real(c.size());
    std::transform(c.begin(), c.end(), real.begin(), [](auto z) { return z.real(); });
    return Polynomial(std::move(real));
}

Polynomial Polynomial::constant(double value) { return Polynomial(std::vector<double>{value}); }

void Polynomial::normalize() {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double v) { return v != 0.0; });
    coeffs_.erase(coeffs_.begin(), first);
}

double Polynomial::coefficient(int power) const noexcept {
    if (power < 0 || power > degree()) {
        return 0.0;
    }
    return coeffs_[static_cast<std::size_t>(degree() - power)];
}

std::vector<double> Polynomial::ascending(std::size_t length) const {
    std::vector<double> out(std::max(length, coeffs_.size()), 0.0);
    for (int p = 0; p <= degree(); ++p) {
        out[static_cast<std::size_t>(p)] = coefficient(p);
    }
    out.resize(std::max(length, coeffs_.size()));
    return out;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const noexcept {
    std::complex<double> acc = 0.0;
    for (double c : coeffs_) {
        acc = acc * s + c;
    }
    return acc;
}

double Polynomial::operator()(double s) const noexcept {
    double acc = 0.0;
    for (double c : coeffs_) {
        acc = acc * s + c;
    }
    return acc;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) {
        throw std::invalid_argument("monic: zero polynomial");
    }
    std::vector<double> c = coeffs_;
    const double lead = c.front();
    for (double& v : c) {
        v /= lead;
    }
    c.front() = 1.0;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::derivative() const {
    if (degree() <= 0) {
        return {};
    }
    std::vector<double> c(coeffs_.size() - 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = coeffs_[i] * static_cast<double>(degree() - static_cast<int>(i));
    }
    return Polynomial(std::move(c));
}

bool Polynomial::all_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

Polynomial combine(const Polynomial& a, const Polynomial& b, double sign) {
    const std::size_t n = std::max(a.coefficients().size(), b.coefficients().size());
    std::vector<double> out(n, 0.0);
    const auto add = [&](const std::vector<double>& c, double k) {
        const std::size_t off = n - c.size();
        for (std::size_t i = 0; i < c.size(); ++i) {
            out[off + i] += k * c[i];
        }
    };
    add(a.coefficients(), 1.0);
    add(b.coefficients(), sign);
    return Polynomial(std::move(out));
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return combine(a, b, 1.0); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return combine(a, b, -1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    const auto& x = a.coefficients();
    const auto& y = b.coefficients();
    std::vector<double> out(x.size() + y.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            out[i + j] += x[i] * y[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial operator*(double k, const Polynomial& p) {
    std::vector<double> c = p.coefficients();
    for (double& v : c) {
        v *= k;
    }
    return Polynomial(std::move(c));
}

PolynomialDivision divide(const Polynomial& numerator, const Polynomial& divisor) {
    if (divisor.is_zero()) {
        throw std::invalid_argument("divide: zero divisor");
    }
    std::vector<double> rem = numerator.coefficients();
    const auto& d = divisor.coefficients();
    if (numerator.degree() < divisor.degree()) {
        return {Polynomial{}, numerator};
    }
    const std::size_t qn = rem.size() - d.size() + 1;
    std::vector<double> q(qn, 0.0);
    for (std::size_t i = 0; i < qn; ++i) {
        const double f = rem[i] / d.front();
        q[i] = f;
        for (std::size_t j = 0; j < d.size(); ++j) {
            rem[i + j] -= f * d[j];
        }
        rem[i] = 0.0;
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
}

double max_coefficient_difference(const Polynomial& a, const Polynomial& b) {
    const int n = std::max(a.degree(), b.degree());
    double worst = 0.0;
    for (int p = 0; p <= n; ++p) {
        worst = std::max(worst, std::abs(a.coefficient(p) - b.coefficient(p)));
    }
    return worst;
}

RootSet roots(const Polynomial& p) {
    RootSet out;
    if (p.is_zero()) {
        out.degenerate = true;
        return out;
    }
    const int n = p.degree();
    if (n == 0) {
        return out;
    }
    const auto& c = p.coefficients();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        companion(0, j) = -c[static_cast<std::size_t>(j) + 1] / c.front();
    }
    for (int i = 1; i < n; ++i) {
        companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("roots: eigenvalue iteration did not converge");
    }
    const Polynomial dp = p.derivative();
    out.roots.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::complex<double> r = solver.eigenvalues()[i];
        // Newton polish, kept only while it reduces the residual.
        for (int it = 0; it < 3; ++it) {
            const std::complex<double> d = dp(r);
            if (std::abs(d) == 0.0) {
                break;
            }
            const std::complex<double> candidate = r - p(r) / d;
            if (!(std::abs(p(candidate)) < std::abs(p(r)))) {
                break;
            }
            r = candidate;
        }
        out.max_residual = std::max(out.max_residual, std::abs(p(r)));
        out.roots.push_back(r);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
    });
    return out;
}

}  // namespace crmadapt::lintf
