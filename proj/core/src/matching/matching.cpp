#include "crmadapt/matching/matching.hpp"

#include <Eigen/SVD>
#include <stdexcept>
#include <string>
#include <vector>

namespace crmadapt::matching {

Vector MatchedParameters::full() const {
    const Eigen::Index d = theta1_star.size();
    Vector v(2 * d + 2);
    v(0) = k_star;
    v.segment(1, d) = theta1_star;
    v(1 + d) = theta0_star;
    v.segment(2 + d, d) = theta2_star;
    return v;
}

Vector MatchedParameters::bar() const { return full().tail(full().size() - 1); }

Polynomial filter_polynomial(const RationalTransfer& plant, const RationalTransfer& wm,
                             const std::optional<Polynomial>& lambda0) {
    const int n = plant.denominator().degree();
    const int k = n - 1 - wm.numerator().degree();
    if (k < 0) {
        throw std::invalid_argument("reference model has more zeros than the filter order n-1 allows");
    }
    Polynomial l0 = Polynomial::constant(1.0);
    if (lambda0) {
        if (!lambda0->is_monic() || lambda0->degree() != k || !lintf::is_hurwitz(*lambda0)) {
            throw std::invalid_argument("lambda0 must be monic, Hurwitz and of degree " +
                                        std::to_string(k));
        }
        l0 = *lambda0;
    } else {
        for (int i = 0; i < k; ++i) {
            l0 = l0 * Polynomial{1.0, 1.0};
        }
    }
    return l0 * wm.numerator();
}

Matrix adjugate_times(const Matrix& A, const Vector& b) {
    const Eigen::Index d = A.rows();
    Matrix out = Matrix::Zero(d, d);
    if (d == 0) {
        return out;
    }
    // Faddeev-LeVerrier: adj(sI - A) = sum_k s^{d-1-k} B_k, B_0 = I,
    // B_k = A B_{k-1} + c_k I with c_k = -tr(A B_{k-1}) / k.
    Matrix B = Matrix::Identity(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        out.row(d - 1 - k) = (B * b).transpose();
        const Matrix AB = A * B;
        const double ck = -AB.trace() / static_cast<double>(k + 1);
        B = AB + ck * Matrix::Identity(d, d);
    }
    return out;
}

namespace {

Polynomial from_ascending(const Eigen::Ref<const Vector>& c) {
    std::vector<double> v(static_cast<std::size_t>(c.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        v[static_cast<std::size_t>(c.size() - 1 - i)] = c(i);
    }
    return Polynomial(std::move(v));
}

void append_ascending(Matrix& M, Eigen::Index col, const Polynomial& p) {
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        M(r, col) = p.coefficient(static_cast<int>(r));
    }
    if (p.degree() >= M.rows()) {
        throw std::logic_error("bezout_match: column polynomial exceeds system degree");
    }
}

}  // namespace

MatchedParameters bezout_match(const RationalTransfer& plant, const RationalTransfer& wm,
                               const Matrix& Lambda, const Vector& b_lambda) {
    const int n = plant.denominator().degree();
    const Eigen::Index d = n - 1;
    if (Lambda.rows() != d || Lambda.cols() != d || b_lambda.size() != d) {
        throw std::invalid_argument("bezout_match: Lambda must be (n-1)x(n-1) with n = " +
                                    std::to_string(n));
    }
    if (plant.relative_degree() != wm.relative_degree()) {
        throw std::invalid_argument("bezout_match: plant and reference model relative degrees differ");
    }
    const Polynomial lambda(characteristic_polynomial(Lambda));
    const auto division = lintf::divide(lambda, wm.numerator());
    if (lintf::max_coefficient_difference(division.remainder, Polynomial{}) > 1e-9) {
        throw std::invalid_argument("bezout_match: det(sI - Lambda) must contain Z_m as a factor");
    }
    const Polynomial lambda0 = division.quotient;

    const double kp = plant.gain();
    const Polynomial& Z = plant.numerator();
    const Polynomial& P = plant.denominator();
    const Matrix V = adjugate_times(Lambda, b_lambda);

    const Eigen::Index rows = 2 * n - 1;
    const Eigen::Index unknowns = 2 * d + 1;
    Matrix M = Matrix::Zero(rows, unknowns);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Polynomial vi = from_ascending(V.col(i));
        append_ascending(M, i, vi * P);
        append_ascending(M, d + 1 + i, kp * (Z * vi));
    }
    append_ascending(M, d, kp * (Z * lambda));

    const Polynomial rhs_poly = lambda * P - Z * lambda0 * wm.denominator();
    Vector rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        rhs(r) = rhs_poly.coefficient(static_cast<int>(r));
    }
    if (rhs_poly.degree() >= rows) {
        throw std::invalid_argument("bezout_match: reference model order incompatible with plant");
    }

    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 1e-11 * smax)) {
        throw std::invalid_argument("plant not coprime");
    }
    const Vector x = svd.solve(rhs);

    MatchedParameters out;
    out.k_star = wm.gain() / kp;
    out.theta1_star = x.head(d);
    out.theta0_star = x(d);
    out.theta2_star = x.tail(d);
    out.condition_number = smax / smin;
    return out;
}

ClosedLoop close_loop(const RationalTransfer& plant, const Matrix& Lambda, const Vector& b_lambda,
                      const Vector& theta) {
    const Eigen::Index d = Lambda.rows();
    if (theta.size() != 2 * d + 2) {
        throw std::invalid_argument("close_loop: theta must have 2n entries");
    }
    const Polynomial lambda(characteristic_polynomial(Lambda));
    const Matrix V = adjugate_times(Lambda, b_lambda);
    Polynomial C;
    Polynomial D = theta(1 + d) * lambda;
    for (Eigen::Index i = 0; i < d; ++i) {
        const Polynomial vi = from_ascending(V.col(i));
        C = C + theta(1 + i) * vi;
        D = D + theta(2 + d + i) * vi;
    }
    const double kp = plant.gain();
    const Polynomial& Z = plant.numerator();
    return {theta(0) * kp * (Z * lambda),
            (lambda - C) * plant.denominator() - kp * (Z * D)};
}

}  // namespace crmadapt::matching
