#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyqn/problem_io.hpp"
#include "polyqn/solver.hpp"

namespace polyqn {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitNotConverged = 2 };

struct RunSummary {
    std::string problem;
    Method method;
    Form form;
    Status status;
    int iterations;
    double f_norm;
    double wall_time_ms;
    int f_evals;
    int jacobian_evals;
    int updates_skipped;
};

/// Header `k,f_norm,step_norm,denominator,update_applied,secant_residual`.
void write_trace_csv(std::ostream& os, const SolveResult& result);

/// Header follows RunSummary field order.
void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& rows);

std::vector<RunSummary> summarize(const std::string& problem, const std::vector<MethodRun>& runs);

struct VerifyReport {
    int samples = 0;
    double max_euler_residual = 0.0;  // |J x - f~|_inf / (1 + |J x|_inf)
    double max_fd_discrepancy = 0.0;  // max |J_ij - central difference|
    bool euler_ok = false;
    bool fd_ok = false;
};

inline constexpr double kEulerTolerance = 1e-10;
inline constexpr double kFiniteDifferenceTolerance = 1e-5;

/// Samples points uniformly in [-2,2]^n and checks the Euler identity and the
/// analytic Jacobian against central differences (h = 1e-6 (1 + |x_j|)).
VerifyReport verify_system(const PolySystem& sys, int samples, std::uint64_t seed);

/// Entry point behind the `polyqn` executable: solve, compare, generate, verify.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyqn
