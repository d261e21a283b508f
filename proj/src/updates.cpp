#include "polyqn/updates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polyqn {
namespace {

void check_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
    }
}

void check_length(const Matrix& m, const Vector& v, const char* what, const char* name) {
    if (v.size() != m.rows()) {
        throw std::invalid_argument(std::string(what) + ": " + name + " has length " +
                                    std::to_string(v.size()) + ", expected " +
                                    std::to_string(m.rows()));
    }
}

bool passes(double denom, double eps, double scale) {
    return std::abs(denom) > eps * (1.0 + scale);
}

}  // namespace

UpdateOutcome modified_update(Matrix jac_prev, const Vector& p, const Vector& x_k,
                              const Vector& y, double eps) {
    constexpr const char* what = "modified_update";
    check_square(jac_prev, what);
    check_length(jac_prev, p, what, "p");
    check_length(jac_prev, x_k, what, "x_k");
    check_length(jac_prev, y, what, "y");

    const double d = p.dot(x_k);
    if (!passes(d, eps, p.norm() * x_k.norm())) return {std::move(jac_prev), false, d};

    const Vector u = (y - jac_prev * p) / d;
    jac_prev.noalias() += u * p.transpose();
    return {std::move(jac_prev), true, d};
}

UpdateOutcome modified_inverse_update(Matrix jac_inv_prev, const Vector& p, const Vector& x_k,
                                      const Vector& y, double eps) {
    constexpr const char* what = "modified_inverse_update";
    check_square(jac_inv_prev, what);
    check_length(jac_inv_prev, p, what, "p");
    check_length(jac_inv_prev, x_k, what, "x_k");
    check_length(jac_inv_prev, y, what, "y");

    const double d = p.dot(x_k);
    if (!passes(d, eps, p.norm() * x_k.norm())) return {std::move(jac_inv_prev), false, d};

    // J_prev^{-1} s = (J_prev^{-1} y - J_prev^{-1} J_prev p) / d = (J_prev^{-1} y - p) / d
    const Vector hs = (jac_inv_prev * y - p) / d;
    const double sm = 1.0 + p.dot(hs);
    if (!passes(sm, eps, p.norm() * hs.norm())) return {std::move(jac_inv_prev), false, sm};

    const Vector row = jac_inv_prev.transpose() * p;
    jac_inv_prev.noalias() -= (hs / sm) * row.transpose();
    return {std::move(jac_inv_prev), true, sm};
}

UpdateOutcome broyden_update(Matrix jac_prev, const Vector& p, const Vector& q, double eps) {
    constexpr const char* what = "broyden_update";
    check_square(jac_prev, what);
    check_length(jac_prev, p, what, "p");
    check_length(jac_prev, q, what, "q");

    const double pp = p.squaredNorm();
    if (!(pp > eps * eps)) return {std::move(jac_prev), false, pp};

    const Vector r = (jac_prev * p - q) / pp;
    jac_prev.noalias() -= r * p.transpose();
    return {std::move(jac_prev), true, pp};
}

UpdateOutcome broyden_inverse_update(Matrix jac_inv_prev, const Vector& p, const Vector& q,
                                     double eps) {
    constexpr const char* what = "broyden_inverse_update";
    check_square(jac_inv_prev, what);
    check_length(jac_inv_prev, p, what, "p");
    check_length(jac_inv_prev, q, what, "q");

    const Vector hq = jac_inv_prev * q;
    const double d = p.dot(hq);
    if (!passes(d, eps, p.norm() * hq.norm())) return {std::move(jac_inv_prev), false, d};

    const Vector row = jac_inv_prev.transpose() * p;
    jac_inv_prev.noalias() -= ((hq - p) / d) * row.transpose();
    return {std::move(jac_inv_prev), true, d};
}

UpdateOutcome sherman_morrison(Matrix a_inv, const Vector& u, const Vector& v, double eps) {
    constexpr const char* what = "sherman_morrison";
    check_square(a_inv, what);
    check_length(a_inv, u, what, "u");
    check_length(a_inv, v, what, "v");

    const Vector au = a_inv * u;
    const double denom = 1.0 + v.dot(au);
    if (!passes(denom, eps, v.norm() * au.norm())) return {std::move(a_inv), false, denom};

    const Vector row = a_inv.transpose() * v;
    a_inv.noalias() -= (au / denom) * row.transpose();
    return {std::move(a_inv), true, denom};
}

}  // namespace polyqn
