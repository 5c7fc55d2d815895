#pragma once

#include <optional>

#include "crmadapt/lintf/transfer.hpp"
#include "crmadapt/realize/realize.hpp"
#include "crmadapt/state_space.hpp"

namespace crmadapt::matching {

using lintf::Polynomial;
using lintf::RationalTransfer;

struct MatchedParameters {
    double k_star = 0.0;
    Vector theta1_star;
    double theta0_star = 0.0;
    Vector theta2_star;
    // 2-norm condition number of the Diophantine system (1 for n = 1).
    double condition_number = 1.0;

    // [k*, theta_1*, theta_0*, theta_2*]
    Vector full() const;
    // [theta_1*, theta_0*, theta_2*]
    Vector bar() const;
};

// lambda(s) = Lambda0(s) Z_m(s) with deg lambda = n - 1. Lambda0 defaults to
// (s + 1)^{n - 1 - deg Z_m}; an explicit Lambda0 must be monic, Hurwitz and of
// that degree.
Polynomial filter_polynomial(const RationalTransfer& plant, const RationalTransfer& wm,
                             const std::optional<Polynomial>& lambda0 = std::nullopt);

// Solves C P + k_p Z D = lambda P - Z Lambda0 P_m for the controller
// polynomials C = theta_1^T adj(sI - Lambda) b_lambda and
// D = theta_0 lambda + theta_2^T adj(sI - Lambda) b_lambda, where
// lambda = det(sI - Lambda) must contain Z_m as a factor. k* = k_m / k_p.
// Throws std::invalid_argument("plant not coprime") when the system is
// singular.
MatchedParameters bezout_match(const RationalTransfer& plant, const RationalTransfer& wm,
                               const Matrix& Lambda, const Vector& b_lambda);

// Closed-loop transfer function with frozen parameters theta = [k, th1, th0, th2]:
// k k_p Z lambda / ((lambda - C) P - k_p Z D), returned as raw numerator and
// denominator polynomials.
struct ClosedLoop {
    Polynomial numerator;
    Polynomial denominator;
};
ClosedLoop close_loop(const RationalTransfer& plant, const Matrix& Lambda, const Vector& b_lambda,
                      const Vector& theta);

// Columns hold the ascending coefficients of adj(sI - A) b (rows: powers of s).
Matrix adjugate_times(const Matrix& A, const Vector& b);

}  // namespace crmadapt::matching
