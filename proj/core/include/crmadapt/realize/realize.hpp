#pragma once

#include <complex>
#include <span>

#include "crmadapt/lintf/transfer.hpp"
#include "crmadapt/state_space.hpp"

namespace crmadapt::realize {

using lintf::Polynomial;
using lintf::RationalTransfer;

// Observer canonical form with c = [0 ... 0 1]^T: ones on the subdiagonal,
// last column -[a_0 ... a_{m-1}] (ascending denominator coefficients) and b
// the ascending numerator coefficients times the gain. Consequently
// c^T (sI - A)^{-1} = [1, s, ..., s^{m-1}] / D(s).
StateSpaceModel observer_canonical(const RationalTransfer& w);

// Closed-loop reference model
//   x_m' = A_m x_m + b_m k_m r - ell (y - y_m),   y_m = c_m^T x_m
// where (A_m, b_m, c_m) realizes W'_m in observer canonical form and k_m sits
// at the input. With the error feedback entering as -ell e_y, gains with
// negative entries speed up the error dynamics (ell = -l gives a pole at
// -(a_m + l) in the first-order case).
struct ReferenceModel {
    Matrix Am;
    Vector bm;
    Vector cm;
    double km = 1.0;
    Vector ell;

    Eigen::Index order() const { return Am.rows(); }
    // A_m + ell c_m^T, the error dynamics matrix A_ell.
    Matrix error_matrix() const { return Am + ell * cm.transpose(); }
};

ReferenceModel make_reference_model(const RationalTransfer& wm, const Vector& ell);

// N_ell(s) = sum_i ell_i s^{i-1} = k_ell Z_ell(s).
Polynomial gain_polynomial(const Vector& ell);

// W_ell = c_m^T (sI - A_m)^{-1} ell = k_ell Z_ell / P_m. ell = 0 gives the zero
// transfer function.
RationalTransfer wl_from_gain(const RationalTransfer& wm, const Vector& ell);

struct CrmErrorTf {
    // k_m Z_m / (P_m - k_ell Z_ell); prime() yields W'_e
    RationalTransfer we;
    bool hurwitz = true;
};
CrmErrorTf crm_error_tf(const RationalTransfer& wm, const Vector& ell);

// ell placing the roots of P_m - k_ell Z_ell at `targets` (conjugate closed,
// open left half plane, one target per reference-model state).
Vector design_gain(const RationalTransfer& wm, std::span<const std::complex<double>> targets);

// Input filter omega' = Lambda omega + b_lambda v in controllable companion
// form of the monic Hurwitz polynomial lambda(s), so that
// (sI - Lambda)^{-1} b_lambda = [1, s, ..., s^{d-1}]^T / lambda(s).
struct RegressorFilter {
    Matrix Lambda;
    Vector b_lambda;
    Polynomial lambda;

    Eigen::Index order() const { return Lambda.rows(); }
};
RegressorFilter make_regressor_filter(const Polynomial& lambda);

// Non-minimal error model e' = A_e e + b_mn phi^T omega, e_y = k_p c_mn^T e.
struct NonMinimalErrorModel {
    Matrix Amn;
    Matrix Ae;
    Matrix G;
    Vector bmn;
    Vector cmn;
    double kp = 1.0;

    // k_p c_mn^T (sI - A_e)^{-1} b_mn
    std::complex<double> response(std::complex<double> s) const;
};

// theta_star is laid out as [k*, theta_1*, theta_0*, theta_2*]. G embeds the
// reference state (A_mn G = G A_m, k_p c_mn^T G = c_m^T) and is built from the
// two controllability matrices.
NonMinimalErrorModel nonminimal_error_model(const RationalTransfer& plant, const Matrix& Lambda,
                                            const Vector& b_lambda, const Vector& theta_star,
                                            const Vector& ell, const RationalTransfer& wm);

}  // namespace crmadapt::realize
