#pragma once

#include <stdexcept>

#include "crmadapt/state_space.hpp"

namespace crmadapt::lintf {

// Anderson form of the Kalman-Yakubovich lemma:
//   A^T P + P A = -g g^T - 2 mu P,   P b = c,   P = P^T > 0.
struct KypSolution {
    Matrix P;
    Vector g;
    double mu = 0.0;
    // ||A^T P + P A + g g^T + 2 mu P||_F
    double residual = 0.0;
    // ||P b - c||
    double pb_error = 0.0;
    // true when produced by the iterative path for order > 2
    bool numeric = false;
};

class KypError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed forms for orders 1 and 2; a damped Gauss-Newton search over
// (P, g) restricted to P b = c for larger orders. Throws KypError when the
// realization is not SPR or no certificate is found.
KypSolution kyp_solve(const StateSpaceModel& model, double mu);

// Residual of the Anderson equations for a candidate pair.
double kyp_residual(const StateSpaceModel& model, const Matrix& P, const Vector& g, double mu);

}  // namespace crmadapt::lintf
