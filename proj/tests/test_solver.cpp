#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyqn/builtins.hpp"
#include "polyqn/solver.hpp"

using namespace polyqn;

namespace {

PolySystem s1() { return scalar_quadratic().system; }
Vector v1(double a) { return Vector::Constant(1, a); }

double f_s1(double x) { return x * x - 4.0; }
double df_s1(double x) { return 2.0 * x; }

SolverConfig config(Method m, Form f = Form::direct) {
    SolverConfig cfg;
    cfg.method = m;
    cfg.form = f;
    return cfg;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ProblemFile planted(int n, int degree, std::uint64_t seed, double perturbation = 0.05) {
    PlantedOptions o;
    o.system = {n, degree, 2, -1.0, 1.0};
    o.perturbation = perturbation;
    return planted_random(o, seed);
}

}  // namespace

TEST_CASE("newton on x^2 - 4 follows the hand recurrence") {
    const auto res = newton_solve(s1(), v1(1.0), config(Method::newton));
    CHECK(res.status == Status::converged_f);
    const auto expected = oracle::scalar_newton(f_s1, df_s1, 1.0, res.iterations);
    REQUIRE(res.trace.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(rel_diff(res.trace[k].x[0], expected[k]) <= 1e-15);
    }
    CHECK(res.trace[1].x[0] == 2.5);
    CHECK(res.trace[2].x[0] == doctest::Approx(2.05).epsilon(1e-15));
    CHECK(res.trace[3].x[0] == doctest::Approx(2.0006097560975610).epsilon(1e-15));
    CHECK(res.jacobian_evals == res.iterations);
    CHECK(res.f_evals == res.iterations + 1);
    CHECK(res.x_final[0] == doctest::Approx(2.0));
}

TEST_CASE("newton edge cases") {
    SUBCASE("start at the root") {
        const auto res = newton_solve(s1(), v1(2.0), config(Method::newton));
        CHECK(res.status == Status::converged_f);
        CHECK(res.iterations == 0);
        CHECK(res.jacobian_evals == 0);
        CHECK(res.trace.size() == 1);
    }
    SUBCASE("double root converges linearly without failing") {
        const PolySystem sq(1, 2, Vector::Zero(1), {{0, {0, 0}, 1.0}});
        const auto res = newton_solve(sq, v1(1.0), config(Method::newton));
        CHECK((res.status == Status::converged_f || res.status == Status::max_iter));
        for (std::size_t k = 1; k < res.trace.size(); ++k) {
            CHECK(res.trace[k].x[0] == doctest::Approx(0.5 * res.trace[k - 1].x[0]));
        }
    }
    SUBCASE("singular jacobian at the start") {
        const auto res = newton_solve(s1(), v1(0.0), config(Method::newton));
        CHECK(res.status == Status::singular);
        CHECK(res.trace.size() == 1);
        CHECK(res.iterations == 0);
    }
    SUBCASE("forced non-convergence") {
        auto cfg = config(Method::newton);
        cfg.max_iter = 1;
        const auto res = newton_solve(s1(), v1(1.0), cfg);
        CHECK(res.status == Status::max_iter);
        CHECK(res.trace.size() == 2);
    }
}

TEST_CASE("modified method degenerates to newton in one dimension") {
    const auto newton = newton_solve(s1(), v1(1.0), config(Method::newton));
    for (Form form : {Form::direct, Form::inverse}) {
        const auto res = quasi_newton_solve(s1(), v1(1.0), config(Method::modified, form));
        CHECK(res.status == Status::converged_f);
        REQUIRE(res.trace.size() == newton.trace.size());
        for (std::size_t k = 0; k < res.trace.size(); ++k) {
            CHECK(rel_diff(res.trace[k].x[0], newton.trace[k].x[0]) <= 1e-10);
        }
        CHECK(res.jacobian_evals == 1);
    }

    // cubic with a nonzero linear part, x0 = 1.5
    const auto cubic = scalar_cubic();
    auto f = [](double x) { return x * x * x - 2 * x - 4; };
    auto df = [](double x) { return 3 * x * x - 2; };
    const auto res = quasi_newton_solve(cubic.system, cubic.x0, config(Method::modified));
    const auto expected = oracle::scalar_newton(f, df, 1.5, res.iterations);
    for (std::size_t k = 0; k < res.trace.size(); ++k) {
        CHECK(rel_diff(res.trace[k].x[0], expected[k]) <= 1e-10);
    }
}

TEST_CASE("broyden method is the secant method in one dimension") {
    for (Form form : {Form::direct, Form::inverse}) {
        const auto res = quasi_newton_solve(s1(), v1(1.0), config(Method::broyden, form));
        CHECK(res.status == Status::converged_f);
        const auto expected = oracle::scalar_secant(f_s1, df_s1, 1.0, res.iterations);
        // the last step may be rejected by the safeguard, iterates are unaffected
        for (std::size_t k = 0; k < res.trace.size(); ++k) {
            CHECK(rel_diff(res.trace[k].x[0], expected[k]) <= 1e-10);
        }
        CHECK(res.trace[2].x[0] == doctest::Approx(2.5 - 2.25 / 3.5).epsilon(1e-12));
    }
}

TEST_CASE("quasi-Newton from a planted root does nothing") {
    const auto p = planted(5, 3, 4);
    for (Method m : {Method::broyden, Method::modified}) {
        for (Form f : {Form::direct, Form::inverse}) {
            const auto res = quasi_newton_solve(p.system, *p.x_star, config(m, f));
            CHECK(res.status == Status::converged_f);
            CHECK(res.iterations == 0);
            CHECK(res.updates_skipped() == 0);
            CHECK(res.jacobian_evals == 1);
        }
    }
}

TEST_CASE("maintained identity J_k x_k = f~(x_k) along modified runs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = planted(3 + static_cast<int>(seed), 1 + static_cast<int>(seed % 4), seed);
        const auto res = quasi_newton_solve(p.system, p.x0, config(Method::modified));
        CHECK(converged(res.status));
        for (const auto& rec : res.trace) {
            if (rec.k > 0 && !rec.update_applied) break;
            const double scale = 1.0 + inf_norm(eval_f_tilde(p.system, rec.x));
            CHECK(rec.secant_residual <= 1e-8 * scale);
        }
    }
}

TEST_CASE("broyden runs record the secant residual") {
    const auto p = broyden_tridiagonal(8);
    const auto res = quasi_newton_solve(p.system, p.x0, config(Method::broyden));
    CHECK(converged(res.status));
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
        const auto& rec = res.trace[k];
        if (!rec.update_applied) continue;
        const Vector q = eval_f(p.system, rec.x) - eval_f(p.system, res.trace[k - 1].x);
        CHECK(rec.secant_residual <= 1e-10 * (1.0 + inf_norm(q)));
    }
}

TEST_CASE("direct and inverse forms agree") {
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        const auto p = planted(6, 3, seed);
        for (Method m : {Method::broyden, Method::modified}) {
            const auto d = quasi_newton_solve(p.system, p.x0, config(m, Form::direct));
            const auto i = quasi_newton_solve(p.system, p.x0, config(m, Form::inverse));
            const auto common = std::min(d.trace.size(), i.trace.size());
            for (std::size_t k = 0; k < common; ++k) {
                const double diff = inf_norm(d.trace[k].x - i.trace[k].x);
                CHECK(diff <= 1e-6 * inf_norm(d.trace[k].x));
            }
        }
    }
}

TEST_CASE("rejected updates: hold, stall, restart") {
    SUBCASE("holding J gives the chord method and can stall") {
        auto cfg = config(Method::modified);
        cfg.denom_eps = 1e6;  // reject every update
        cfg.tol_x = 0.05;
        const auto res = quasi_newton_solve(s1(), v1(1.9), cfg);
        CHECK(res.status == Status::stalled);
        CHECK(res.iterations == 2);
        CHECK(res.updates_skipped() == 2);
        // chord step with J = f'(1.9) = 3.8
        CHECK(res.trace[2].x[0] ==
              doctest::Approx(res.trace[1].x[0] - f_s1(res.trace[1].x[0]) / 3.8).epsilon(1e-14));
    }
    SUBCASE("restart_on_skip rebuilds the exact jacobian") {
        auto cfg = config(Method::modified);
        cfg.denom_eps = 1e6;
        cfg.restart_on_skip = true;
        const auto newton = newton_solve(s1(), v1(1.0), config(Method::newton));
        for (Form form : {Form::direct, Form::inverse}) {
            cfg.form = form;
            const auto res = quasi_newton_solve(s1(), v1(1.0), cfg);
            CHECK(res.status == Status::converged_f);
            CHECK(res.iterations == newton.iterations);
            CHECK(res.jacobian_evals == res.iterations + 1);
            CHECK(res.updates_skipped() == res.iterations);
        }
    }
}

TEST_CASE("identity initialization still converges on a mild problem") {
    // f(x) = x + 0.1 x^2 - c with a root at 0.5
    PolySystem sys(1, 2, Vector::Zero(1), {{0, {0}, 1.0}, {0, {0, 0}, 0.1}});
    sys = plant_root(sys, v1(0.5));
    auto cfg = config(Method::broyden);
    cfg.init = Init::identity;
    const auto res = quasi_newton_solve(sys, v1(0.0), cfg);
    CHECK(res.status == Status::converged_f);
    CHECK(res.jacobian_evals == 0);
    CHECK(res.x_final[0] == doctest::Approx(0.5));
}

TEST_CASE("singular starting jacobian in quasi-Newton") {
    for (Form form : {Form::direct, Form::inverse}) {
        const auto res = quasi_newton_solve(s1(), v1(0.0), config(Method::modified, form));
        CHECK(res.status == Status::singular);
        CHECK(res.trace.size() == 1);
    }
}

TEST_CASE("configuration errors") {
    auto cfg = config(Method::modified);
    cfg.tol_f = 0.0;
    CHECK_THROWS_AS(quasi_newton_solve(s1(), v1(1.0), cfg), std::invalid_argument);
    cfg = config(Method::modified);
    cfg.max_iter = 0;
    CHECK_THROWS_AS(newton_solve(s1(), v1(1.0), cfg), std::invalid_argument);
    CHECK_THROWS_AS(quasi_newton_solve(s1(), v1(1.0), config(Method::newton)),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve(s1(), Vector::Ones(2), config(Method::broyden)), std::invalid_argument);
}

TEST_CASE("traces are bit-for-bit deterministic") {
    const auto p = planted(10, 3, 77);
    for (Method m : {Method::newton, Method::broyden, Method::modified}) {
        const auto a = solve(p.system, p.x0, config(m, Form::inverse));
        const auto b = solve(p.system, p.x0, config(m, Form::inverse));
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t k = 0; k < a.trace.size(); ++k) {
            CHECK(a.trace[k].x == b.trace[k].x);
            CHECK(a.trace[k].f_norm == b.trace[k].f_norm);
            CHECK(a.trace[k].denominator == b.trace[k].denominator);
            CHECK(a.trace[k].secant_residual == b.trace[k].secant_residual);
        }
    }
}

TEST_CASE("broyden_tridiagonal") {
    const auto p3 = broyden_tridiagonal(3);
    CHECK(eval_f(p3.system, p3.x0)[0] == -2.0);
    CHECK(p3.x0 == Vector::Constant(3, -1.0));
    CHECK_THROWS_AS(broyden_tridiagonal(1), std::invalid_argument);

    const auto p = broyden_tridiagonal(12);
    std::mt19937_64 rng(12);
    for (int s = 0; s < 20; ++s) {
        const Vector x = oracle::random_vector(rng, 12, -2.0, 2.0);
        CHECK(inf_norm(eval_f(p.system, x) - oracle::broyden_tridiagonal_f(x)) <= 1e-12);
        CHECK(inf_norm(euler_residual(p.system, x)) <= 1e-12);
    }
}

TEST_CASE("compare_methods") {
    SUBCASE("order and 1-D degeneration") {
        const auto runs = compare_methods(s1(), v1(1.0), SolverConfig{});
        REQUIRE(runs.size() == 5);
        CHECK(runs[0].method == Method::newton);
        CHECK((runs[1].method == Method::broyden && runs[1].form == Form::direct));
        CHECK((runs[2].method == Method::broyden && runs[2].form == Form::inverse));
        CHECK((runs[3].method == Method::modified && runs[3].form == Form::direct));
        CHECK((runs[4].method == Method::modified && runs[4].form == Form::inverse));
        CHECK(runs[3].result.iterations == runs[0].result.iterations);
        CHECK(runs[4].result.iterations == runs[0].result.iterations);
    }
    SUBCASE("broyden tridiagonal n=10 regression counts") {
        SolverConfig cfg;
        cfg.tol_f = 1e-8;
        cfg.max_iter = 100;
        const auto p = broyden_tridiagonal(10);
        const auto runs = compare_methods(p.system, p.x0, cfg);
        const int expected[] = {4, 10, 10, 18, 18};
        for (std::size_t i = 0; i < runs.size(); ++i) {
            CHECK(runs[i].result.status == Status::converged_f);
            CHECK(runs[i].result.iterations == expected[i]);
        }
    }
    SUBCASE("planted root start") {
        const auto p = planted(4, 2, 5);
        for (const auto& run : compare_methods(p.system, *p.x_star, SolverConfig{})) {
            CHECK(run.result.iterations == 0);
        }
    }
    SUBCASE("random planted problems converge with newton from a nearby start") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto p = planted(3, 2, seed, 0.1);
            const auto res = newton_solve(p.system, p.x0, config(Method::newton));
            CHECK(res.status == Status::converged_f);
            CHECK(inf_norm(res.x_final - *p.x_star) <= 1e-8);
        }
    }
}
