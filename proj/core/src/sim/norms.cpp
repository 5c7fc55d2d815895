#include "crmadapt/sim/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crmadapt/lintf/expm.hpp"

namespace crmadapt::sim {

double integral_of_square(std::span<const double> x, double h) {
    if (x.size() < 2) {
        return 0.0;
    }
    double acc = 0.5 * (x.front() * x.front() + x.back() * x.back());
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        acc += x[k] * x[k];
    }
    return acc * h;
}

double l2_norm(std::span<const double> x, double h, std::optional<double> up_to) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("l2_norm: step must be positive");
    }
    std::size_t count = x.size();
    if (up_to) {
        const auto last = static_cast<std::size_t>(std::floor(*up_to / h + 1e-9));
        count = std::min(count, last + 1);
    }
    return std::sqrt(integral_of_square(x.first(count), h));
}

double linf_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

std::vector<double> filter_foh(const StateSpaceModel& model, std::span<const double> u, double h) {
    const Eigen::Index n = model.order();
    std::vector<double> y(u.size(), 0.0);
    if (n == 0 || u.empty()) {
        return y;
    }
    // exp of [[A, b, 0], [0, 0, 1], [0, 0, 0]] h gives Phi, Gamma0 and Gamma1 / h.
    Matrix M = Matrix::Zero(n + 2, n + 2);
    M.topLeftCorner(n, n) = model.A * h;
    M.block(0, n, n, 1) = model.b * h;
    M(n, n + 1) = 1.0;
    const Matrix E = lintf::expm(M);
    const Matrix Phi = E.topLeftCorner(n, n);
    const Vector g0 = E.block(0, n, n, 1);
    const Vector g1 = E.block(0, n + 1, n, 1);

    Vector x = Vector::Zero(n);
    for (std::size_t k = 0; k < u.size(); ++k) {
        y[k] = model.c.dot(x);
        if (k + 1 < u.size()) {
            x = Phi * x + g0 * u[k] + g1 * (u[k + 1] - u[k]);
        }
    }
    return y;
}

}  // namespace crmadapt::sim
