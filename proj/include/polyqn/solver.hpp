#pragma once

#include <string_view>
#include <vector>

#include "polyqn/polysys.hpp"
#include "polyqn/updates.hpp"

namespace polyqn {

enum class Method { newton, broyden, modified };
enum class Form { direct, inverse };
enum class Init { exact_jacobian, identity };
enum class Status { converged_f, converged_x, max_iter, singular, stalled };

std::string_view to_string(Method m);
std::string_view to_string(Form f);
std::string_view to_string(Init i);
std::string_view to_string(Status s);

inline bool converged(Status s) { return s == Status::converged_f || s == Status::converged_x; }

struct SolverConfig {
    Method method = Method::modified;
    Form form = Form::direct;  // ignored for newton
    double tol_f = 1e-10;
    double tol_x = 1e-12;
    int max_iter = 200;
    double denom_eps = kDefaultDenomEps;
    Init init = Init::exact_jacobian;
    // Rebuild from the analytic Jacobian at x_k whenever an update is rejected.
    bool restart_on_skip = false;

    /// Throws std::invalid_argument on non-positive tolerances or max_iter < 1.
    void validate() const;
};

struct IterRecord {
    int k = 0;
    Vector x;
    double f_norm = 0.0;
    double step_norm = 0.0;
    double denominator = 0.0;  // 0 when no update happened at this k
    bool update_applied = false;
    // modified: |J_k x_k - f~(x_k)|_inf (inverse form: |J_k^{-1} f~(x_k) - x_k|_inf)
    // broyden:  |J_k p_k - q_k|_inf    (inverse form: |J_k^{-1} q_k - p_k|_inf)
    // newton:   0
    double secant_residual = 0.0;
};

struct SolveResult {
    Status status = Status::max_iter;
    std::vector<IterRecord> trace;
    Vector x_final;
    int iterations = 0;
    int f_evals = 0;
    int jacobian_evals = 0;

    int updates_skipped() const;
};

/// Newton iteration with a fresh analytic Jacobian each step.
SolveResult newton_solve(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg);

/// Full-step quasi-Newton iteration, method broyden or modified, direct
/// (J_k maintained, LU solve per step) or inverse (J_k^{-1} maintained).
SolveResult quasi_newton_solve(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg);

/// Dispatches on cfg.method.
SolveResult solve(const PolySystem& sys, const Vector& x0, const SolverConfig& cfg);

struct MethodRun {
    Method method;
    Form form;
    SolveResult result;
    double wall_time_ms = 0.0;
};

/// newton, broyden/direct, broyden/inverse, modified/direct, modified/inverse;
/// always in that order.
std::vector<MethodRun> compare_methods(const PolySystem& sys, const Vector& x0,
                                       const SolverConfig& base_cfg);

}  // namespace polyqn
