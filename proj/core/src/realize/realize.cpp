#include "crmadapt/realize/realize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace crmadapt::realize {

StateSpaceModel observer_canonical(const RationalTransfer& w) {
    const int m = w.denominator().degree();
    if (w.numerator().degree() >= m) {
        throw std::invalid_argument("observer_canonical: transfer function must be strictly proper");
    }
    StateSpaceModel ss{Matrix::Zero(m, m), Vector::Zero(m), Vector::Zero(m)};
    for (int i = 0; i < m; ++i) {
        if (i > 0) {
            ss.A(i, i - 1) = 1.0;
        }
        ss.A(i, m - 1) = -w.denominator().coefficient(i);
        ss.b(i) = w.gain() * w.numerator().coefficient(i);
    }
    ss.c(m - 1) = 1.0;
    return ss;
}

ReferenceModel make_reference_model(const RationalTransfer& wm, const Vector& ell) {
    const StateSpaceModel ss = observer_canonical(wm.prime());
    if (ell.size() != ss.order()) {
        throw std::invalid_argument("reference model: ell has dimension " +
                                    std::to_string(ell.size()) + ", expected " +
                                    std::to_string(ss.order()));
    }
    return ReferenceModel{ss.A, ss.b, ss.c, wm.gain(), ell};
}

Polynomial gain_polynomial(const Vector& ell) {
    std::vector<double> c(static_cast<std::size_t>(ell.size()));
    for (Eigen::Index i = 0; i < ell.size(); ++i) {
        c[static_cast<std::size_t>(ell.size() - 1 - i)] = ell(i);
    }
    return Polynomial(std::move(c));
}

namespace {

void check_gain_dimension(const RationalTransfer& wm, const Vector& ell) {
    if (ell.size() != wm.denominator().degree()) {
        throw std::invalid_argument("ell has dimension " + std::to_string(ell.size()) +
                                    ", reference model order is " +
                                    std::to_string(wm.denominator().degree()));
    }
}

}  // namespace

RationalTransfer wl_from_gain(const RationalTransfer& wm, const Vector& ell) {
    check_gain_dimension(wm, ell);
    const Polynomial n = gain_polynomial(ell);
    if (n.is_zero()) {
        return RationalTransfer::zero(wm.denominator());
    }
    return {n.leading(), n.monic(), wm.denominator()};
}

CrmErrorTf crm_error_tf(const RationalTransfer& wm, const Vector& ell) {
    check_gain_dimension(wm, ell);
    const Polynomial den = wm.denominator() - gain_polynomial(ell);
    CrmErrorTf out{RationalTransfer(wm.gain(), wm.numerator(), den), true};
    out.hurwitz = lintf::is_hurwitz(den);
    return out;
}

Vector design_gain(const RationalTransfer& wm, std::span<const std::complex<double>> targets) {
    const int m = wm.denominator().degree();
    if (static_cast<int>(targets.size()) != m) {
        throw std::invalid_argument("design_gain: expected " + std::to_string(m) +
                                    " target poles, got " + std::to_string(targets.size()));
    }
    for (const auto& p : targets) {
        if (!(p.real() < 0.0)) {
            throw std::invalid_argument("design_gain: target poles must lie in Re s < 0");
        }
        if (p.imag() != 0.0) {
            const auto conj_present = std::any_of(targets.begin(), targets.end(), [&](auto q) {
                return std::abs(q - std::conj(p)) <= 1e-12 * (1.0 + std::abs(p));
            });
            if (!conj_present) {
                throw std::invalid_argument("design_gain: target poles must be conjugate closed");
            }
        }
    }
    const Polynomial target = Polynomial::from_roots(targets);
    const Polynomial n = wm.denominator() - target;
    Vector ell(m);
    for (int i = 0; i < m; ++i) {
        ell(i) = n.coefficient(i);
    }
    return ell;
}

RegressorFilter make_regressor_filter(const Polynomial& lambda) {
    if (!lambda.is_monic()) {
        throw std::invalid_argument("regressor filter polynomial must be monic");
    }
    const int d = lambda.degree();
    RegressorFilter f{Matrix::Zero(d, d), Vector::Zero(d), lambda};
    for (int i = 0; i + 1 < d; ++i) {
        f.Lambda(i, i + 1) = 1.0;
    }
    for (int j = 0; j < d; ++j) {
        f.Lambda(d - 1, j) = -lambda.coefficient(j);
    }
    if (d > 0) {
        f.b_lambda(d - 1) = 1.0;
    }
    return f;
}

std::complex<double> NonMinimalErrorModel::response(std::complex<double> s) const {
    return kp * StateSpaceModel{Ae, bmn, cmn}.frequency_response(s);
}

NonMinimalErrorModel nonminimal_error_model(const RationalTransfer& plant, const Matrix& Lambda,
                                            const Vector& b_lambda, const Vector& theta_star,
                                            const Vector& ell, const RationalTransfer& wm) {
    const int n = plant.denominator().degree();
    const Eigen::Index d = n - 1;
    if (Lambda.rows() != d || Lambda.cols() != d || b_lambda.size() != d) {
        throw std::invalid_argument("nonminimal_error_model: Lambda must be (n-1)x(n-1)");
    }
    if (theta_star.size() != 2 * n) {
        throw std::invalid_argument("nonminimal_error_model: theta* must have 2n entries");
    }
    check_gain_dimension(wm, ell);

    const StateSpaceModel p = observer_canonical(plant.prime());
    const double kp = plant.gain();
    const Vector theta1 = theta_star.segment(1, d);
    const double theta0 = theta_star(1 + d);
    const Vector theta2 = theta_star.segment(2 + d, d);

    const Eigen::Index N = n + 2 * d;
    NonMinimalErrorModel out;
    out.kp = kp;
    out.Amn = Matrix::Zero(N, N);
    out.Amn.block(0, 0, n, n) = p.A + theta0 * kp * p.b * p.c.transpose();
    out.Amn.block(0, n, n, d) = p.b * theta1.transpose();
    out.Amn.block(0, n + d, n, d) = p.b * theta2.transpose();
    out.Amn.block(n, 0, d, n) = theta0 * kp * b_lambda * p.c.transpose();
    out.Amn.block(n, n, d, d) = Lambda + b_lambda * theta1.transpose();
    out.Amn.block(n, n + d, d, d) = b_lambda * theta2.transpose();
    out.Amn.block(n + d, 0, d, n) = kp * b_lambda * p.c.transpose();
    out.Amn.block(n + d, n + d, d, d) = Lambda;

    out.bmn = Vector::Zero(N);
    out.bmn.head(n) = p.b;
    out.bmn.segment(n, d) = b_lambda;
    out.cmn = Vector::Zero(N);
    out.cmn.head(n) = p.c;

    // G maps reference states into the non-minimal coordinates: A_mn G = G A_m
    // and G b_m = b_mn / k_p, hence G [b_m, A_m b_m, ...] = [b_mn, A_mn b_mn, ...] / k_p.
    const ReferenceModel ref = make_reference_model(wm, Vector::Zero(ell.size()));
    const Eigen::Index m = ref.order();
    Matrix K(N, m);
    Matrix C(m, m);
    K.col(0) = out.bmn;
    C.col(0) = ref.bm;
    for (Eigen::Index j = 1; j < m; ++j) {
        K.col(j) = out.Amn * K.col(j - 1);
        C.col(j) = ref.Am * C.col(j - 1);
    }
    out.G = C.transpose().fullPivLu().solve(K.transpose()).transpose() / kp;
    out.Ae = out.Amn + out.G * ell * kp * out.cmn.transpose();
    return out;
}

}  // namespace crmadapt::realize
