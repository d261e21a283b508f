#include "polyqn/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace polyqn {
namespace {

Eigen::PartialPivLU<Matrix> factor(const Matrix& jac) {
    if (jac.rows() != jac.cols() || jac.rows() == 0) {
        throw std::invalid_argument("linear_solve: matrix must be square and non-empty");
    }
    if (!jac.allFinite()) throw SingularMatrixError("matrix has non-finite entries");

    Eigen::PartialPivLU<Matrix> lu(jac);
    const auto& packed = lu.matrixLU();
    const double scale = jac.cwiseAbs().maxCoeff();
    const double tiny = static_cast<double>(jac.rows()) * std::numeric_limits<double>::epsilon() * scale;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        if (!(std::abs(packed(i, i)) > tiny)) {
            throw SingularMatrixError("singular matrix: pivot " + std::to_string(i) +
                                      " is zero to working precision");
        }
    }
    return lu;
}

}  // namespace

Vector linear_solve(const Matrix& jac, const Vector& rhs) {
    if (rhs.size() != jac.rows()) {
        throw std::invalid_argument("linear_solve: rhs length does not match matrix");
    }
    Vector z = factor(jac).solve(rhs);
    if (!z.allFinite()) throw SingularMatrixError("linear_solve produced non-finite values");
    return z;
}

Matrix inverse(const Matrix& jac) {
    Matrix inv = factor(jac).inverse();
    if (!inv.allFinite()) throw SingularMatrixError("inverse produced non-finite values");
    return inv;
}

}  // namespace polyqn
