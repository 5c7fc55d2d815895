#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace crmadapt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Single-input single-output realization x' = A x + b u, y = c^T x.
// There is no feedthrough term; every transfer function in this library is
// strictly proper.
struct StateSpaceModel {
    Matrix A;
    Vector b;
    Vector c;

    Eigen::Index order() const { return A.rows(); }

    // c^T (sI - A)^{-1} b
    std::complex<double> frequency_response(std::complex<double> s) const;
};

// Coefficients (highest degree first) of det(sI - A) and of c^T adj(sI - A) b,
// via the Faddeev-LeVerrier recursion. Suitable for the small orders used here.
struct CharacteristicData {
    std::vector<double> denominator;
    std::vector<double> numerator;
};
CharacteristicData characteristic_data(const StateSpaceModel& model);

// Coefficients of det(sI - A), highest first.
std::vector<double> characteristic_polynomial(const Matrix& A);

}  // namespace crmadapt
