#include "polyqn/builtins.hpp"

#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace polyqn {

ProblemFile broyden_tridiagonal(int n) {
    if (n < 2) throw std::invalid_argument("broyden_tridiagonal: n must be >= 2");
    std::vector<Monomial> terms;
    for (int i = 0; i < n; ++i) {
        terms.push_back({i, {i}, 3.0});
        if (i > 0) terms.push_back({i, {i - 1}, -1.0});
        if (i + 1 < n) terms.push_back({i, {i + 1}, -2.0});
        terms.push_back({i, {i, i}, -2.0});
    }
    PolySystem sys(n, 2, Vector::Ones(n), std::move(terms));
    return {"broyden-tridiagonal:" + std::to_string(n), std::move(sys), Vector::Constant(n, -1.0),
            std::nullopt};
}

ProblemFile scalar_quadratic() {
    PolySystem sys(1, 2, Vector::Constant(1, -4.0), {{0, {0, 0}, 1.0}});
    return {"scalar-quadratic", std::move(sys), Vector::Constant(1, 1.0), Vector::Constant(1, 2.0)};
}

ProblemFile scalar_cubic() {
    PolySystem sys(1, 3, Vector::Constant(1, -4.0), {{0, {0}, -2.0}, {0, {0, 0, 0}, 1.0}});
    return {"scalar-cubic", std::move(sys), Vector::Constant(1, 1.5), Vector::Constant(1, 2.0)};
}

ProblemFile planted_random(const PlantedOptions& opts, std::uint64_t seed) {
    if (!(opts.perturbation >= 0.0)) {
        throw std::invalid_argument("planted_random: perturbation must be >= 0");
    }
    const PolySystem base = random_system(opts.system, seed);
    const int n = opts.system.n;

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector x_star(n);
    for (int i = 0; i < n; ++i) x_star[i] = unit(rng);
    Vector x0(n);
    for (int i = 0; i < n; ++i) x0[i] = x_star[i] + opts.perturbation * unit(rng);

    std::ostringstream name;
    name << "planted-random:" << n << ':' << opts.system.max_degree << ':' << seed;
    return {name.str(), plant_root(base, x_star), std::move(x0), std::move(x_star)};
}

ProblemFile builtin_problem(const std::string& id) {
    std::vector<std::string> parts;
    std::stringstream ss(id);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.empty()) throw std::invalid_argument("empty builtin name");

    auto number = [&](std::size_t i) -> long long {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(parts.at(i), &used);
            if (used != parts[i].size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("builtin '" + id + "': bad numeric argument");
        }
    };

    const auto& name = parts[0];
    if (name == "scalar-quadratic" && parts.size() == 1) return scalar_quadratic();
    if (name == "scalar-cubic" && parts.size() == 1) return scalar_cubic();
    if (name == "broyden-tridiagonal" && parts.size() == 2) {
        return broyden_tridiagonal(static_cast<int>(number(1)));
    }
    if (name == "planted-random" && parts.size() >= 2 && parts.size() <= 4) {
        PlantedOptions opts;
        opts.system.n = static_cast<int>(number(1));
        if (parts.size() >= 3) opts.system.max_degree = static_cast<int>(number(2));
        const auto seed = parts.size() == 4 ? static_cast<std::uint64_t>(number(3)) : 0u;
        return planted_random(opts, seed);
    }
    throw std::invalid_argument("unknown builtin problem '" + id +
                                "' (expected broyden-tridiagonal:N, scalar-quadratic, "
                                "scalar-cubic, planted-random:N[:M[:SEED]])");
}

}  // namespace polyqn
