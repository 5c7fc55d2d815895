#include "crmadapt/lintf/kyp.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "crmadapt/lintf/spr.hpp"
#include "crmadapt/lintf/transfer.hpp"

namespace crmadapt::lintf {

namespace {

Matrix shifted_lyapunov(const Matrix& A, const Matrix& P, double mu) {
    // -(A^T P + P A + 2 mu P), which must equal g g^T
    return -(A.transpose() * P + P * A + 2.0 * mu * P);
}

double min_eigenvalue(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Symmetric P0 with P0 b = c.
Matrix particular_solution(const Vector& b, const Vector& c) {
    const double beta = b.squaredNorm();
    return (c * b.transpose() + b * c.transpose()) / beta -
           (c.dot(b) / (beta * beta)) * (b * b.transpose());
}

// Rank-one factor of a (numerically) rank-one PSD 2x2 or general matrix.
Vector rank_one_factor(const Matrix& M) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
    const Eigen::Index top = M.rows() - 1;
    const double lambda = std::max(0.0, es.eigenvalues()(top));
    return std::sqrt(lambda) * es.eigenvectors().col(top);
}

struct Candidate {
    Matrix P;
    Vector g;
    double residual;
    double pmin;
};

std::optional<Candidate> make_candidate(const StateSpaceModel& m, const Matrix& P, double mu) {
    const Matrix Ps = 0.5 * (P + P.transpose());
    const double pmin = min_eigenvalue(Ps);
    if (!(pmin > 0.0)) {
        return std::nullopt;
    }
    const Matrix M = shifted_lyapunov(m.A, Ps, mu);
    if (M.trace() < -1e-10 * (1.0 + M.norm())) {
        return std::nullopt;
    }
    Vector g = rank_one_factor(M);
    return Candidate{Ps, g, kyp_residual(m, Ps, g, mu), pmin};
}

KypSolution finish(const StateSpaceModel& m, const Candidate& c, double mu, bool numeric) {
    KypSolution s;
    s.P = c.P;
    s.g = c.g;
    s.mu = mu;
    s.residual = c.residual;
    s.pb_error = (c.P * m.b - m.c).norm();
    s.numeric = numeric;
    return s;
}

KypSolution solve_order1(const StateSpaceModel& m, double mu) {
    const double a = m.A(0, 0);
    const double b = m.b(0);
    const double c = m.c(0);
    if (b == 0.0) {
        throw KypError("kyp_solve: zero input vector");
    }
    const double p = c / b;
    if (!(p > 0.0)) {
        throw KypError("kyp_solve: realization is not SPR (P = c/b <= 0)");
    }
    const double gg = -2.0 * p * (a + mu);
    if (gg < -1e-12 * (1.0 + std::abs(p * a))) {
        throw KypError("kyp_solve: mu exceeds the decay rate of the realization");
    }
    Candidate cand{Matrix::Constant(1, 1, p), Vector::Constant(1, std::sqrt(std::max(0.0, gg))), 0.0,
                   p};
    cand.residual = kyp_residual(m, cand.P, cand.g, mu);
    return finish(m, cand, mu, false);
}

// P = P0 + t w w^T with w orthogonal to b; rank(M(t)) <= 1 forces det M(t) = 0,
// a quadratic in t.
KypSolution solve_order2(const StateSpaceModel& m, double mu) {
    const Matrix P0 = particular_solution(m.b, m.c);
    Vector w(2);
    w << -m.b(1), m.b(0);
    const Matrix N = w * w.transpose();
    const Matrix M0 = shifted_lyapunov(m.A, P0, mu);
    const Matrix M1 = shifted_lyapunov(m.A, N, mu);

    const double qa = M1(0, 0) * M1(1, 1) - M1(0, 1) * M1(0, 1);
    const double qb = M0(0, 0) * M1(1, 1) + M1(0, 0) * M0(1, 1) - 2.0 * M0(0, 1) * M1(0, 1);
    const double qc = M0(0, 0) * M0(1, 1) - M0(0, 1) * M0(0, 1);
    const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc), 1e-300});

    std::vector<double> ts;
    if (std::abs(qa) > 1e-13 * scale) {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= -1e-12 * qb * qb) {
            const double sq = std::sqrt(std::max(0.0, disc));
            // numerically stable pair
            const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
            if (q != 0.0) {
                ts.push_back(q / qa);
                ts.push_back(qc / q);
            } else {
                ts.push_back(0.0);
            }
        }
    } else if (std::abs(qb) > 1e-13 * scale) {
        ts.push_back(-qc / qb);
    } else if (std::abs(qc) <= 1e-13 * scale) {
        // det M(t) vanishes identically: every t is admissible, prefer a well
        // conditioned P.
        for (double t = -1e3; t <= 1e3; t += 0.5) {
            ts.push_back(t);
        }
    }

    std::optional<Candidate> best;
    for (double t : ts) {
        auto cand = make_candidate(m, P0 + t * N, mu);
        if (!cand) {
            continue;
        }
        if (!best || cand->residual < best->residual - 1e-14 ||
            (std::abs(cand->residual - best->residual) <= 1e-14 && cand->pmin > best->pmin)) {
            best = cand;
        }
    }
    if (!best || best->residual > 1e-8 * (1.0 + best->P.norm())) {
        throw KypError("kyp_solve: no certificate found for this realization and mu");
    }
    return finish(m, *best, mu, false);
}

// Gauss-Newton with Levenberg damping on the upper triangle of M(S) - g g^T,
// where P = P0 + B S B^T and B spans the complement of b.
KypSolution solve_numeric(const StateSpaceModel& m, double mu) {
    const Eigen::Index n = m.order();
    const Matrix P0 = particular_solution(m.b, m.c);
    Eigen::JacobiSVD<Matrix> svd(m.b, Eigen::ComputeFullU);
    const Matrix B = svd.matrixU().rightCols(n - 1);
    const Eigen::Index ns = (n - 1) * n / 2;
    const Eigen::Index nunk = ns + n;
    const Eigen::Index nres = n * (n + 1) / 2;

    const auto unpack_P = [&](const Vector& x) {
        Matrix S = Matrix::Zero(n - 1, n - 1);
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < n - 1; ++i) {
            for (Eigen::Index j = i; j < n - 1; ++j) {
                S(i, j) = S(j, i) = x(k++);
            }
        }
        return Matrix(P0 + B * S * B.transpose());
    };
    const auto residual = [&](const Vector& x) {
        const Matrix P = unpack_P(x);
        const Vector g = x.tail(n);
        const Matrix R = shifted_lyapunov(m.A, P, mu) - g * g.transpose();
        Vector r(nres);
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                r(k++) = R(i, j);
            }
        }
        return r;
    };

    std::optional<Candidate> best;
    for (double alpha : {1.0, 10.0, 0.1, 100.0, 0.01}) {
        Vector x = Vector::Zero(nunk);
        {
            Eigen::Index k = 0;
            for (Eigen::Index i = 0; i < n - 1; ++i) {
                for (Eigen::Index j = i; j < n - 1; ++j) {
                    x(k++) = (i == j) ? alpha : 0.0;
                }
            }
            x.tail(n) = rank_one_factor(shifted_lyapunov(m.A, unpack_P(x), mu));
        }
        double lambda = 1e-3;
        Vector r = residual(x);
        for (int it = 0; it < 400 && r.norm() > 1e-14; ++it) {
            Matrix J(nres, nunk);
            for (Eigen::Index k = 0; k < nunk; ++k) {
                const double h = 1e-6 * (1.0 + std::abs(x(k)));
                Vector xp = x;
                Vector xm = x;
                xp(k) += h;
                xm(k) -= h;
                J.col(k) = (residual(xp) - residual(xm)) / (2.0 * h);
            }
            const Matrix JtJ = J.transpose() * J;
            const Vector Jtr = J.transpose() * r;
            bool improved = false;
            for (int tries = 0; tries < 20; ++tries) {
                Matrix H = JtJ;
                H.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
                const Vector step = H.ldlt().solve(-Jtr);
                const Vector rn = residual(x + step);
                if (rn.norm() < r.norm()) {
                    x += step;
                    r = rn;
                    lambda = std::max(lambda * 0.3, 1e-12);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!improved) {
                break;
            }
        }
        auto cand = make_candidate(m, unpack_P(x), mu);
        if (cand) {
            cand->g = x.tail(n);
            cand->residual = kyp_residual(m, cand->P, cand->g, mu);
            if (!best || cand->residual < best->residual) {
                best = cand;
            }
        }
    }
    if (!best || best->residual > 1e-6) {
        throw KypError("kyp_solve: no certificate found (numeric search)");
    }
    return finish(m, *best, mu, true);
}

}  // namespace

double kyp_residual(const StateSpaceModel& model, const Matrix& P, const Vector& g, double mu) {
    return (model.A.transpose() * P + P * model.A + g * g.transpose() + 2.0 * mu * P).norm();
}

KypSolution kyp_solve(const StateSpaceModel& model, double mu) {
    const Eigen::Index n = model.order();
    if (n == 0 || model.A.cols() != n || model.b.size() != n || model.c.size() != n) {
        throw KypError("kyp_solve: inconsistent realization dimensions");
    }
    if (!(mu > 0.0)) {
        throw KypError("kyp_solve: mu must be positive");
    }
    const CharacteristicData cd = characteristic_data(model);
    const Polynomial num(cd.numerator);
    const Polynomial den(cd.denominator);
    if (num.is_zero()) {
        throw KypError("kyp_solve: realization has a zero transfer function");
    }
    if (!is_spr(make_transfer(num, den)).verdict) {
        throw KypError("kyp_solve: transfer function of the realization is not SPR");
    }
    if (n == 1) {
        return solve_order1(model, mu);
    }
    if (n == 2) {
        return solve_order2(model, mu);
    }
    return solve_numeric(model, mu);
}

}  // namespace crmadapt::lintf
