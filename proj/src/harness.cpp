#include "polyqn/harness.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "polyqn/builtins.hpp"

namespace polyqn {

void write_trace_csv(std::ostream& os, const SolveResult& result) {
    os << "k,f_norm,step_norm,denominator,update_applied,secant_residual\n";
    for (const auto& r : result.trace) {
        os << r.k << ',' << format_double(r.f_norm) << ',' << format_double(r.step_norm) << ','
           << format_double(r.denominator) << ',' << (r.update_applied ? 1 : 0) << ','
           << format_double(r.secant_residual) << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& rows) {
    os << "problem,method,form,status,iterations,f_norm,wall_time_ms,f_evals,jacobian_evals,"
          "updates_skipped\n";
    for (const auto& r : rows) {
        os << r.problem << ',' << to_string(r.method) << ','
           << (r.method == Method::newton ? std::string_view("-") : to_string(r.form)) << ','
           << to_string(r.status) << ',' << r.iterations << ',' << format_double(r.f_norm) << ','
           << format_double(r.wall_time_ms) << ',' << r.f_evals << ',' << r.jacobian_evals << ','
           << r.updates_skipped << '\n';
    }
}

std::vector<RunSummary> summarize(const std::string& problem, const std::vector<MethodRun>& runs) {
    std::vector<RunSummary> rows;
    for (const auto& run : runs) {
        const auto& res = run.result;
        rows.push_back({problem, run.method, run.form, res.status, res.iterations,
                        res.trace.back().f_norm, run.wall_time_ms, res.f_evals, res.jacobian_evals,
                        run.method == Method::newton ? 0 : res.updates_skipped()});
    }
    return rows;
}

VerifyReport verify_system(const PolySystem& sys, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const int n = sys.dimension();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);

    VerifyReport rep;
    rep.samples = samples;
    for (int s = 0; s < samples; ++s) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = coord(rng);

        const Matrix jac = jacobian(sys, x);
        const Vector jx = jac * x;
        const double euler = inf_norm(jx - eval_f_tilde(sys, x)) / (1.0 + inf_norm(jx));
        rep.max_euler_residual = std::max(rep.max_euler_residual, euler);

        for (int j = 0; j < n; ++j) {
            const double h = 1e-6 * (1.0 + std::abs(x[j]));
            Vector xp = x;
            Vector xm = x;
            xp[j] += h;
            xm[j] -= h;
            const Vector column = (eval_f(sys, xp) - eval_f(sys, xm)) / (xp[j] - xm[j]);
            rep.max_fd_discrepancy =
                std::max(rep.max_fd_discrepancy, inf_norm(jac.col(j) - column));
        }
    }
    rep.euler_ok = rep.max_euler_residual <= kEulerTolerance;
    rep.fd_ok = rep.max_fd_discrepancy <= kFiniteDifferenceTolerance;
    return rep;
}

namespace {

struct SolverFlags {
    std::string method = "modified";
    std::string form = "direct";
    std::string init = "exact";
    SolverConfig cfg;

    void add_to(CLI::App& cmd, bool with_method) {
        if (with_method) {
            cmd.add_option("--method", method, "newton | broyden | modified")
                ->check(CLI::IsMember({"newton", "broyden", "modified"}))
                ->capture_default_str();
            cmd.add_option("--form", form, "direct | inverse (ignored for newton)")
                ->check(CLI::IsMember({"direct", "inverse"}))
                ->capture_default_str();
        }
        cmd.add_option("--init", init, "exact | identity")
            ->check(CLI::IsMember({"exact", "identity"}))
            ->capture_default_str();
        cmd.add_option("--tol-f", cfg.tol_f, "residual stop, infinity norm")->capture_default_str();
        cmd.add_option("--tol-x", cfg.tol_x, "step stop, infinity norm")->capture_default_str();
        cmd.add_option("--max-iter", cfg.max_iter)->capture_default_str();
        cmd.add_option("--denom-eps", cfg.denom_eps, "update safeguard threshold")
            ->capture_default_str();
        cmd.add_flag("--restart-on-skip", cfg.restart_on_skip,
                     "rebuild the analytic Jacobian after a rejected update");
    }

    SolverConfig resolve() const {
        static const std::map<std::string, Method> methods{
            {"newton", Method::newton}, {"broyden", Method::broyden}, {"modified", Method::modified}};
        SolverConfig out = cfg;
        out.method = methods.at(method);
        out.form = form == "inverse" ? Form::inverse : Form::direct;
        out.init = init == "identity" ? Init::identity : Init::exact_jacobian;
        out.validate();
        return out;
    }
};

ProblemFile load_one(const std::string& path, const std::string& builtin) {
    if (path.empty() == builtin.empty()) {
        throw std::invalid_argument("give exactly one of --problem or --builtin");
    }
    return path.empty() ? builtin_problem(builtin) : load_problem(path);
}

// Writes to --out when given, otherwise to `out`.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    write(file);
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-Newton solvers for polynomial-only nonlinear systems", "polyqn"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve one problem and print the iteration trace");
    std::string solve_problem, solve_builtin, solve_out;
    SolverFlags solve_flags;
    solve_cmd->add_option("--problem", solve_problem, "problem file (JSON)");
    solve_cmd->add_option("--builtin", solve_builtin, "built-in problem name");
    solve_cmd->add_option("--out", solve_out, "write the CSV trace here instead of stdout");
    solve_flags.add_to(*solve_cmd, true);

    // compare
    auto* compare_cmd =
        app.add_subcommand("compare", "run newton and the four quasi-Newton variants");
    std::vector<std::string> compare_problems, compare_builtins;
    std::string compare_out;
    SolverFlags compare_flags;
    compare_cmd->add_option("--problem", compare_problems, "problem file (repeatable)");
    compare_cmd->add_option("--builtin", compare_builtins,
                            "broyden-tridiagonal:N, scalar-quadratic, scalar-cubic, "
                            "planted-random:N[:M[:SEED]] (repeatable)");
    compare_cmd->add_option("--out", compare_out, "write the CSV summary here instead of stdout");
    compare_flags.add_to(*compare_cmd, false);

    // generate
    auto* generate_cmd =
        app.add_subcommand("generate", "write a random problem with a planted root");
    PlantedOptions planted;
    std::uint64_t generate_seed = 0;
    std::string generate_out;
    generate_cmd->add_option("--n", planted.system.n)->required();
    generate_cmd->add_option("--max-degree", planted.system.max_degree)->capture_default_str();
    generate_cmd->add_option("--terms-per-degree", planted.system.terms_per_degree)
        ->capture_default_str();
    generate_cmd->add_option("--seed", generate_seed)->capture_default_str();
    generate_cmd->add_option("--perturbation", planted.perturbation,
                             "x0 = x_star + perturbation * U[-1,1]^n")
        ->capture_default_str();
    generate_cmd->add_option("--out", generate_out, "output path (stdout when omitted)");

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "check J(x) x = f~(x) and the analytic Jacobian at random points");
    std::string verify_problem, verify_builtin;
    int verify_samples = 100;
    std::uint64_t verify_seed = 0;
    verify_cmd->add_option("--problem", verify_problem, "problem file (JSON)");
    verify_cmd->add_option("--builtin", verify_builtin, "built-in problem name");
    verify_cmd->add_option("--samples", verify_samples)->capture_default_str();
    verify_cmd->add_option("--seed", verify_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInputError;
    }

    try {
        if (solve_cmd->parsed()) {
            const SolverConfig cfg = solve_flags.resolve();
            const ProblemFile problem = load_one(solve_problem, solve_builtin);
            const SolveResult result = solve(problem.system, problem.x0, cfg);
            emit(solve_out, out, [&](std::ostream& os) { write_trace_csv(os, result); });
            if (!converged(result.status)) {
                err << problem.name << ": " << to_string(result.status) << " after "
                    << result.iterations << " iterations\n";
                return kExitNotConverged;
            }
            return kExitOk;
        }

        if (compare_cmd->parsed()) {
            if (compare_problems.empty() && compare_builtins.empty()) {
                err << "compare: no problems given\n" << compare_cmd->help();
                return kExitInputError;
            }
            const SolverConfig cfg = compare_flags.resolve();
            std::vector<ProblemFile> problems;
            for (const auto& path : compare_problems) problems.push_back(load_problem(path));
            for (const auto& name : compare_builtins) problems.push_back(builtin_problem(name));

            std::vector<RunSummary> rows;
            bool all_converged = true;
            for (const auto& problem : problems) {
                const auto runs = compare_methods(problem.system, problem.x0, cfg);
                for (const auto& run : runs) {
                    all_converged = all_converged && converged(run.result.status);
                }
                auto summary = summarize(problem.name, runs);
                rows.insert(rows.end(), summary.begin(), summary.end());
            }
            emit(compare_out, out, [&](std::ostream& os) { write_summary_csv(os, rows); });
            return all_converged ? kExitOk : kExitNotConverged;
        }

        if (generate_cmd->parsed()) {
            const ProblemFile problem = planted_random(planted, generate_seed);
            validate_problem(problem);
            emit(generate_out, out, [&](std::ostream& os) { os << serialize_problem(problem); });
            return kExitOk;
        }

        if (verify_cmd->parsed()) {
            if (verify_samples < 1) {
                err << "verify: --samples must be >= 1\n";
                return kExitInputError;
            }
            const ProblemFile problem = load_one(verify_problem, verify_builtin);
            const VerifyReport rep = verify_system(problem.system, verify_samples, verify_seed);
            out << "problem,samples,max_euler_residual,max_fd_discrepancy,euler_ok,fd_ok\n"
                << problem.name << ',' << rep.samples << ',' << format_double(rep.max_euler_residual)
                << ',' << format_double(rep.max_fd_discrepancy) << ',' << (rep.euler_ok ? 1 : 0)
                << ',' << (rep.fd_ok ? 1 : 0) << '\n';
            return rep.euler_ok && rep.fd_ok ? kExitOk : kExitNotConverged;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace polyqn
