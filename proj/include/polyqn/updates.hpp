#pragma once

#include "polyqn/types.hpp"

namespace polyqn {

/// Result of a rank-one update. When `applied` is false the safeguard
/// rejected the update and `matrix` is the input, untouched.
struct UpdateOutcome {
    Matrix matrix;
    bool applied = false;
    double denominator = 0.0;
};

inline constexpr double kDefaultDenomEps = 1e-12;

// Modified rank-one updates ("modified BFGS"). They enforce the exact relation
//   J_k x_k - J_{k-1} x_{k-1} = y,   y = f~(x_k) - f~(x_{k-1}),
// which for polynomial systems follows from J(x) x = f~(x). The classic secant
// condition J_k p = q is only an approximation of the same information.

/// J_k = J_prev + u p^T with u = (y - J_prev p) / (p^T x_k).
/// Rejected when |p^T x_k| <= eps (1 + |p|_2 |x_k|_2).
UpdateOutcome modified_update(Matrix jac_prev, const Vector& p, const Vector& x_k,
                              const Vector& y, double eps = kDefaultDenomEps);

/// Sherman-Morrison form of modified_update acting on J_prev^{-1}. Never
/// forms J_prev: J_prev^{-1} s is recovered as (J_prev^{-1} y - p) / (p^T x_k).
/// `denominator` reports 1 + p^T J_prev^{-1} s, or p^T x_k if that check failed.
UpdateOutcome modified_inverse_update(Matrix jac_inv_prev, const Vector& p, const Vector& x_k,
                                      const Vector& y, double eps = kDefaultDenomEps);

/// Classic rank-one secant update J_k = J_prev - (J_prev p - q) p^T / (p^T p).
/// Rejected when p^T p <= eps^2.
UpdateOutcome broyden_update(Matrix jac_prev, const Vector& p, const Vector& q,
                             double eps = kDefaultDenomEps);

/// Inverse of broyden_update:
///   H_k = H - (H q - p) p^T H / (p^T H q).
UpdateOutcome broyden_inverse_update(Matrix jac_inv_prev, const Vector& p, const Vector& q,
                                     double eps = kDefaultDenomEps);

/// (A + u v^T)^{-1} from A^{-1}. Rejected when
/// |1 + v^T A^{-1} u| <= eps (1 + |v|_2 |A^{-1} u|_2).
UpdateOutcome sherman_morrison(Matrix a_inv, const Vector& u, const Vector& v,
                               double eps = kDefaultDenomEps);

}  // namespace polyqn
