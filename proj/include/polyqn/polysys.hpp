#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polyqn/types.hpp"

namespace polyqn {

/// One monomial term c * x[vars[0]] * ... * x[vars[m-1]] contributing to
/// component `row` of the degree-m homogeneous part, m = vars.size().
struct Monomial {
    int row = 0;
    std::vector<int> vars;
    double coeff = 0.0;

    int degree() const { return static_cast<int>(vars.size()); }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Square polynomial system f(x) = sum_{m=1..M} N_m(x) + b.
///
/// The degree-1 terms collectively encode the linear part L. Construction
/// canonicalizes every multi-index (sorted nondecreasing) and merges
/// entries sharing (degree, row, multi-index); merged entries keep the
/// position of their first occurrence. Immutable afterwards.
class PolySystem {
public:
    /// Throws std::invalid_argument when n < 1, max_degree < 1, b has the
    /// wrong length, or a term has an out-of-range index or degree.
    PolySystem(int n, int max_degree, Vector b, std::vector<Monomial> terms);

    int dimension() const { return n_; }
    int max_degree() const { return max_degree_; }
    const Vector& constant() const { return b_; }

    /// Canonical terms of exactly degree m, in evaluation order.
    std::span<const Monomial> terms(int degree) const;

    /// All terms, ascending degree, each degree in evaluation order.
    std::vector<Monomial> all_terms() const;

    PolySystem with_constant(Vector b) const;

    friend bool operator==(const PolySystem&, const PolySystem&);

private:
    int n_;
    int max_degree_;
    Vector b_;
    std::vector<std::vector<Monomial>> by_degree_;  // index m-1
};

Vector eval_f(const PolySystem& sys, const Vector& x);

/// N_m(x) alone. Throws std::invalid_argument unless 1 <= m <= max_degree.
Vector eval_homogeneous(const PolySystem& sys, int m, const Vector& x);

/// Analytic Jacobian by the product rule over each monomial.
Matrix jacobian(const PolySystem& sys, const Vector& x);

/// f~(x) = sum_m m * N_m(x). The constant b does not appear.
Vector eval_f_tilde(const PolySystem& sys, const Vector& x);

/// J(x) x - f~(x); zero up to rounding for every x.
Vector euler_residual(const PolySystem& sys, const Vector& x);

/// Copy of sys whose constant makes x_star an exact root.
PolySystem plant_root(const PolySystem& sys, const Vector& x_star);

struct RandomSystemOptions {
    int n = 4;
    int max_degree = 3;
    int terms_per_degree = 2;  // per row, per degree
    double coeff_lo = -1.0;
    double coeff_hi = 1.0;
};

/// Seeded random system with b = 0. Each row carries a dominant diagonal
/// linear entry so J stays nonsingular near the origin.
PolySystem random_system(const RandomSystemOptions& opts, std::uint64_t seed);

}  // namespace polyqn
