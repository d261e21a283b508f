#include "polyqn/polysys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace polyqn {
namespace {

void require_length(const PolySystem& sys, const Vector& x, const char* what) {
    if (x.size() != sys.dimension()) {
        throw std::invalid_argument(std::string(what) + ": expected vector of length " +
                                    std::to_string(sys.dimension()) + ", got " +
                                    std::to_string(x.size()));
    }
}

double monomial_value(const Monomial& t, const Vector& x) {
    double v = t.coeff;
    for (int j : t.vars) v *= x[j];
    return v;
}

Vector homogeneous_part(std::span<const Monomial> terms, int n, const Vector& x) {
    Vector out = Vector::Zero(n);
    for (const auto& t : terms) out[t.row] += monomial_value(t, x);
    return out;
}

}  // namespace

PolySystem::PolySystem(int n, int max_degree, Vector b, std::vector<Monomial> terms)
    : n_(n), max_degree_(max_degree), b_(std::move(b)) {
    if (n < 1) throw std::invalid_argument("PolySystem: n must be >= 1");
    if (max_degree < 1) throw std::invalid_argument("PolySystem: max_degree must be >= 1");
    if (b_.size() != n) {
        throw std::invalid_argument("PolySystem: b must have length n = " + std::to_string(n));
    }
    if (!b_.allFinite()) throw std::invalid_argument("PolySystem: b must be finite");

    by_degree_.resize(static_cast<std::size_t>(max_degree));
    // (row, multi-index) -> position within its degree bucket
    std::vector<std::map<std::pair<int, std::vector<int>>, std::size_t>> seen(by_degree_.size());

    for (auto& t : terms) {
        const int m = t.degree();
        if (m < 1 || m > max_degree) {
            throw std::invalid_argument("PolySystem: term degree " + std::to_string(m) +
                                        " outside [1, " + std::to_string(max_degree) + "]");
        }
        if (t.row < 0 || t.row >= n) {
            throw std::invalid_argument("PolySystem: term row " + std::to_string(t.row) +
                                        " outside [0, " + std::to_string(n) + ")");
        }
        for (int j : t.vars) {
            if (j < 0 || j >= n) {
                throw std::invalid_argument("PolySystem: variable index " + std::to_string(j) +
                                            " outside [0, " + std::to_string(n) + ")");
            }
        }
        if (!std::isfinite(t.coeff)) {
            throw std::invalid_argument("PolySystem: coefficients must be finite");
        }
        std::sort(t.vars.begin(), t.vars.end());

        auto& bucket = by_degree_[static_cast<std::size_t>(m - 1)];
        auto key = std::make_pair(t.row, t.vars);
        auto& index = seen[static_cast<std::size_t>(m - 1)];
        if (auto it = index.find(key); it != index.end()) {
            bucket[it->second].coeff += t.coeff;
        } else {
            index.emplace(std::move(key), bucket.size());
            bucket.push_back(std::move(t));
        }
    }
}

std::span<const Monomial> PolySystem::terms(int degree) const {
    if (degree < 1 || degree > max_degree_) {
        throw std::invalid_argument("degree " + std::to_string(degree) + " outside [1, " +
                                    std::to_string(max_degree_) + "]");
    }
    return by_degree_[static_cast<std::size_t>(degree - 1)];
}

std::vector<Monomial> PolySystem::all_terms() const {
    std::vector<Monomial> out;
    for (const auto& bucket : by_degree_) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
}

PolySystem PolySystem::with_constant(Vector b) const {
    return PolySystem(n_, max_degree_, std::move(b), all_terms());
}

bool operator==(const PolySystem& a, const PolySystem& b) {
    return a.n_ == b.n_ && a.max_degree_ == b.max_degree_ && a.b_ == b.b_ &&
           a.by_degree_ == b.by_degree_;
}

Vector eval_homogeneous(const PolySystem& sys, int m, const Vector& x) {
    require_length(sys, x, "eval_homogeneous");
    return homogeneous_part(sys.terms(m), sys.dimension(), x);
}

Vector eval_f(const PolySystem& sys, const Vector& x) {
    require_length(sys, x, "eval_f");
    Vector acc = Vector::Zero(sys.dimension());
    for (int m = 1; m <= sys.max_degree(); ++m) {
        acc += homogeneous_part(sys.terms(m), sys.dimension(), x);
    }
    return acc + sys.constant();
}

Vector eval_f_tilde(const PolySystem& sys, const Vector& x) {
    require_length(sys, x, "eval_f_tilde");
    Vector acc = Vector::Zero(sys.dimension());
    for (int m = 1; m <= sys.max_degree(); ++m) {
        acc += static_cast<double>(m) * homogeneous_part(sys.terms(m), sys.dimension(), x);
    }
    return acc;
}

Matrix jacobian(const PolySystem& sys, const Vector& x) {
    require_length(sys, x, "jacobian");
    const int n = sys.dimension();
    Matrix jac = Matrix::Zero(n, n);
    for (int m = 1; m <= sys.max_degree(); ++m) {
        for (const auto& t : sys.terms(m)) {
            for (int pos = 0; pos < m; ++pos) {
                double d = t.coeff;
                for (int s = 0; s < m; ++s) {
                    if (s != pos) d *= x[t.vars[static_cast<std::size_t>(s)]];
                }
                jac(t.row, t.vars[static_cast<std::size_t>(pos)]) += d;
            }
        }
    }
    return jac;
}

Vector euler_residual(const PolySystem& sys, const Vector& x) {
    require_length(sys, x, "euler_residual");
    return jacobian(sys, x) * x - eval_f_tilde(sys, x);
}

PolySystem plant_root(const PolySystem& sys, const Vector& x_star) {
    require_length(sys, x_star, "plant_root");
    Vector nonconstant = Vector::Zero(sys.dimension());
    for (int m = 1; m <= sys.max_degree(); ++m) {
        nonconstant += homogeneous_part(sys.terms(m), sys.dimension(), x_star);
    }
    return sys.with_constant(-nonconstant);
}

PolySystem random_system(const RandomSystemOptions& opts, std::uint64_t seed) {
    if (opts.n < 1 || opts.max_degree < 1 || opts.terms_per_degree < 1) {
        throw std::invalid_argument("random_system: n, max_degree, terms_per_degree must be >= 1");
    }
    if (!(opts.coeff_lo < opts.coeff_hi)) {
        throw std::invalid_argument("random_system: empty coefficient range");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(opts.coeff_lo, opts.coeff_hi);
    std::uniform_int_distribution<int> var(0, opts.n - 1);
    std::bernoulli_distribution sign(0.5);

    const double scale = std::max(std::abs(opts.coeff_lo), std::abs(opts.coeff_hi));
    const double dominance = 1.0 + scale * opts.terms_per_degree * opts.max_degree;

    std::vector<Monomial> terms;
    for (int i = 0; i < opts.n; ++i) {
        const double diag = dominance + std::abs(coeff(rng));
        terms.push_back({i, {i}, sign(rng) ? diag : -diag});
        for (int m = 1; m <= opts.max_degree; ++m) {
            for (int t = 0; t < opts.terms_per_degree; ++t) {
                Monomial mono{i, std::vector<int>(static_cast<std::size_t>(m)), 0.0};
                for (auto& j : mono.vars) j = var(rng);
                mono.coeff = coeff(rng);
                terms.push_back(std::move(mono));
            }
        }
    }
    return PolySystem(opts.n, opts.max_degree, Vector::Zero(opts.n), std::move(terms));
}

}  // namespace polyqn
