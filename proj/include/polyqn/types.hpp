#pragma once

#include <Eigen/Dense>

namespace polyqn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline double inf_norm(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

}  // namespace polyqn
