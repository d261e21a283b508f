#pragma once

#include <cstdint>
#include <string>

#include "polyqn/problem_io.hpp"

namespace polyqn {

/// f_i(x) = (3 - 2 x_i) x_i - x_{i-1} - 2 x_{i+1} + 1, out-of-range neighbours
/// dropped, started from x0 = (-1, ..., -1). Requires n >= 2.
ProblemFile broyden_tridiagonal(int n);

/// f(x) = x^2 - 4 from x0 = 1, root 2.
ProblemFile scalar_quadratic();

/// f(x) = x^3 - 2x - 4 from x0 = 1.5, root 2.
ProblemFile scalar_cubic();

struct PlantedOptions {
    RandomSystemOptions system;
    double perturbation = 0.05;  // x0 = x_star + perturbation * U[-1,1]^n
};

/// random_system with a root planted at a seeded x_star in [-1,1]^n.
ProblemFile planted_random(const PlantedOptions& opts, std::uint64_t seed);

/// Resolves "broyden-tridiagonal:N", "scalar-quadratic", "scalar-cubic" or
/// "planted-random:N[:M[:SEED]]". Throws std::invalid_argument otherwise.
ProblemFile builtin_problem(const std::string& id);

}  // namespace polyqn
