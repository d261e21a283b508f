#pragma once

#include <stdexcept>

#include "polyqn/types.hpp"

namespace polyqn {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves J z = rhs by LU with partial pivoting. Throws SingularMatrixError
/// when a pivot is zero to working precision or the result is not finite.
Vector linear_solve(const Matrix& jac, const Vector& rhs);

/// Dense inverse through the same factorization; same failure contract.
Matrix inverse(const Matrix& jac);

}  // namespace polyqn
