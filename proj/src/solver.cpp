#include "polyqn/solver.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>

#include "polyqn/linalg.hpp"

namespace polyqn {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::newton: return "newton";
        case Method::broyden: return "broyden";
        case Method::modified: return "modified";
    }
    return "?";
}

std::string_view to_string(Form f) { return f == Form::direct ? "direct" : "inverse"; }

std::string_view to_string(Init i) { return i == Init::exact_jacobian ? "exact" : "identity"; }

std::string_view to_string(Status s) {
    switch (s) {
        case Status::converged_f: return "converged_f";
        case Status::converged_x: return "converged_x";
        case Status::max_iter: return "max_iter";
        case Status::singular: return "singular";
        case Status::stalled: return "stalled";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (!(tol_f > 0.0)) throw std::invalid_argument("tol_f must be > 0");
    if (!(tol_x > 0.0)) throw std::invalid_argument("tol_x must be > 0");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(denom_eps > 0.0)) throw std::invalid_argument("denom_eps must be > 0");
}

int SolveResult::updates_skipped() const {
    int skipped = 0;
    for (const auto& r : trace) skipped += (r.k > 0 && !r.update_applied) ? 1 : 0;
    return skipped;
}

namespace {

void check_start(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg) {
    cfg.validate();
    if (x0.size() != sys.dimension()) {
        throw std::invalid_argument("start point has length " + std::to_string(x0.size()) +
                                    ", system has n = " + std::to_string(sys.dimension()));
    }
}

// Applies the stopping rules to the newest record, in the fixed order
// tol_f, tol_x, max_iter. Returns true and sets status when the solve ends.
bool should_stop(SolveResult& res, const SolverConfig& cfg, bool stall_possible) {
    const auto& last = res.trace.back();
    if (last.f_norm <= cfg.tol_f) {
        res.status = Status::converged_f;
        return true;
    }
    if (last.k > 0 && last.step_norm <= cfg.tol_x) {
        const auto& prev = res.trace[res.trace.size() - 2];
        const bool after_skip = prev.k > 0 && !prev.update_applied;
        res.status = (stall_possible && after_skip) ? Status::stalled : Status::converged_x;
        return true;
    }
    if (last.k >= cfg.max_iter) {
        res.status = Status::max_iter;
        return true;
    }
    return false;
}

void finish(SolveResult& res) {
    res.iterations = res.trace.back().k;
    res.x_final = res.trace.back().x;
}

}  // namespace

SolveResult newton_solve(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg) {
    check_start(sys, x0, cfg);

    SolveResult res;
    Vector x = x0;
    Vector fx = eval_f(sys, x);
    res.f_evals = 1;
    res.trace.push_back({0, x, inf_norm(fx), 0.0, 0.0, false, 0.0});

    while (!should_stop(res, cfg, false)) {
        const Matrix jac = jacobian(sys, x);
        ++res.jacobian_evals;
        Vector step;
        try {
            step = linear_solve(jac, fx);
        } catch (const SingularMatrixError&) {
            res.status = Status::singular;
            break;
        }
        Vector x_next = x - step;
        const Vector p = x_next - x;
        fx = eval_f(sys, x_next);
        ++res.f_evals;
        x = std::move(x_next);
        res.trace.push_back({res.trace.back().k + 1, x, inf_norm(fx), inf_norm(p), 0.0, true, 0.0});
    }
    finish(res);
    return res;
}

SolveResult quasi_newton_solve(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg) {
    check_start(sys, x0, cfg);
    if (cfg.method == Method::newton) {
        throw std::invalid_argument("quasi_newton_solve: method must be broyden or modified");
    }
    const bool modified = cfg.method == Method::modified;
    const bool direct = cfg.form == Form::direct;
    const int n = sys.dimension();

    SolveResult res;
    Vector x = x0;
    Vector fx = eval_f(sys, x);
    res.f_evals = 1;
    Vector ft = modified ? eval_f_tilde(sys, x) : Vector();

    // Exact analytic start, as a matrix or its inverse depending on the form.
    auto exact_start = [&](const Vector& at) -> Matrix {
        Matrix jac = jacobian(sys, at);
        ++res.jacobian_evals;
        return direct ? jac : inverse(jac);
    };

    // J_k for the direct form, J_k^{-1} for the inverse form.
    Matrix approx;
    try {
        approx = cfg.init == Init::exact_jacobian ? exact_start(x) : Matrix::Identity(n, n);
    } catch (const SingularMatrixError&) {
        res.trace.push_back({0, x, inf_norm(fx), 0.0, 0.0, false, 0.0});
        res.status = Status::singular;
        finish(res);
        return res;
    }

    auto identity_residual = [&](const Vector& at, const Vector& ft_at) {
        return direct ? inf_norm(approx * at - ft_at) : inf_norm(approx * ft_at - at);
    };

    res.trace.push_back({0, x, inf_norm(fx), 0.0, 0.0, false,
                         modified ? identity_residual(x, ft) : 0.0});

    while (!should_stop(res, cfg, !cfg.restart_on_skip)) {
        Vector step;
        try {
            step = direct ? linear_solve(approx, fx) : Vector(approx * fx);
        } catch (const SingularMatrixError&) {
            res.status = Status::singular;
            break;
        }
        if (!step.allFinite()) {
            res.status = Status::singular;
            break;
        }

        Vector x_next = x - step;
        const Vector p = x_next - x;
        Vector fx_next = eval_f(sys, x_next);
        ++res.f_evals;

        IterRecord rec;
        rec.k = res.trace.back().k + 1;
        rec.step_norm = inf_norm(p);
        rec.f_norm = inf_norm(fx_next);

        Vector ft_next;
        Vector q;
        UpdateOutcome out;
        if (modified) {
            ft_next = eval_f_tilde(sys, x_next);
            const Vector y = ft_next - ft;
            out = direct ? modified_update(std::move(approx), p, x_next, y, cfg.denom_eps)
                         : modified_inverse_update(std::move(approx), p, x_next, y, cfg.denom_eps);
        } else {
            q = fx_next - fx;
            out = direct ? broyden_update(std::move(approx), p, q, cfg.denom_eps)
                         : broyden_inverse_update(std::move(approx), p, q, cfg.denom_eps);
        }
        approx = std::move(out.matrix);
        rec.update_applied = out.applied;
        rec.denominator = out.denominator;

        bool restart_failed = false;
        if (!out.applied && cfg.restart_on_skip) {
            try {
                approx = exact_start(x_next);
            } catch (const SingularMatrixError&) {
                restart_failed = true;
            }
        }

        if (modified) {
            rec.secant_residual = identity_residual(x_next, ft_next);
        } else {
            rec.secant_residual = direct ? inf_norm(approx * p - q) : inf_norm(approx * q - p);
        }

        x = std::move(x_next);
        fx = std::move(fx_next);
        ft = std::move(ft_next);
        rec.x = x;
        res.trace.push_back(std::move(rec));

        if (restart_failed) {
            res.status = Status::singular;
            break;
        }
    }
    finish(res);
    return res;
}

SolveResult solve(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg) {
    return cfg.method == Method::newton ? newton_solve(sys, x0, cfg)
                                        : quasi_newton_solve(sys, x0, cfg);
}

std::vector<MethodRun> compare_methods(const PolySystem& sys, const Vector& x0,
                                       const SolverConfig& base_cfg) {
    static constexpr std::pair<Method, Form> kOrder[] = {
        {Method::newton, Form::direct},   {Method::broyden, Form::direct},
        {Method::broyden, Form::inverse}, {Method::modified, Form::direct},
        {Method::modified, Form::inverse},
    };
    std::vector<MethodRun> runs;
    for (const auto& [method, form] : kOrder) {
        SolverConfig cfg = base_cfg;
        cfg.method = method;
        cfg.form = form;
        const auto start = std::chrono::steady_clock::now();
        SolveResult res = solve(sys, x0, cfg);
        const auto stop = std::chrono::steady_clock::now();
        runs.push_back({method, form, std::move(res),
                        std::chrono::duration<double, std::milli>(stop - start).count()});
    }
    return runs;
}

}  // namespace polyqn
