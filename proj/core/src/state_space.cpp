#include "crmadapt/state_space.hpp"

#include <stdexcept>
#include <vector>

namespace crmadapt {

std::complex<double> StateSpaceModel::frequency_response(std::complex<double> s) const {
    const Eigen::Index n = order();
    if (n == 0) {
        return {0.0, 0.0};
    }
    Eigen::MatrixXcd M = -A.cast<std::complex<double>>();
    M.diagonal().array() += s;
    const Eigen::VectorXcd x = M.partialPivLu().solve(b.cast<std::complex<double>>());
    return c.cast<std::complex<double>>().dot(x);
}

CharacteristicData characteristic_data(const StateSpaceModel& model) {
    const Eigen::Index n = model.order();
    if (model.A.cols() != n || model.b.size() != n || model.c.size() != n) {
        throw std::invalid_argument("characteristic_data: inconsistent dimensions");
    }
    CharacteristicData out;
    out.denominator.assign(static_cast<std::size_t>(n) + 1, 0.0);
    out.denominator[0] = 1.0;
    out.numerator.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 0) {
        return out;
    }
    // adj(sI - A) = sum_{k=0}^{n-1} s^{n-1-k} N_k,  N_0 = I,  N_k = A N_{k-1} + a_k I,
    // a_k = -trace(A N_{k-1}) / k.
    Matrix N = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        out.numerator[static_cast<std::size_t>(k - 1)] = model.c.dot(N * model.b);
        const Matrix AN = model.A * N;
        const double ak = -AN.trace() / static_cast<double>(k);
        out.denominator[static_cast<std::size_t>(k)] = ak;
        N = AN + ak * Matrix::Identity(n, n);
    }
    return out;
}

std::vector<double> characteristic_polynomial(const Matrix& A) {
    StateSpaceModel m{A, Vector::Zero(A.rows()), Vector::Zero(A.rows())};
    return characteristic_data(m).denominator;
}

}  // namespace crmadapt
