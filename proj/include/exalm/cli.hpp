#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "exalm/catalog.hpp"

namespace exalm {

/// Run configuration: catalog id, problem parameters, solver overrides and
/// output location. Loadable from a JSON config file; CLI flags override.
struct RunConfig {
  std::string problem;
  Params params;                               // grid sizes, zeta, horizon, ...
  std::map<std::string, double> solver_num;    // numeric SolverConfig overrides by name
  std::string method;                          // "lbfgs" | "gd" (empty: benchmark default)
  std::string grad_mode;                       // "analytic" | "fd"
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  std::vector<double> sweep_c;                 // optional sweep override
};

/// Parse a JSON config file. Throws std::runtime_error on malformed input.
RunConfig load_run_config(const std::string& path);

void apply_solver_overrides(SolverConfig& cfg, const RunConfig& rc);

/// Solve one catalog problem; writes iterates.csv, summary.json and
/// solution.csv under out_dir/<id>/. Returns 0 when converged, 2 otherwise.
int cmd_run(const RunConfig& rc);

/// Gradient audits, adjoint probes, LICQ / sigma_max / Gramian diagnostics at
/// the initial point. Returns 0 when all audits pass, 2 otherwise.
int cmd_check(const RunConfig& rc);

/// Exactness sweep over the c list; writes sweep.csv. Returns 0 on
/// completion, 1 when the problem has no oracle (e.g. uncontrollable).
int cmd_sweep(const RunConfig& rc);

/// Run a benchmark suite ("all", "oc-only", "calcvar-only") against the
/// oracles; writes per-benchmark artifacts plus bench_report.csv. Returns 0
/// when every bounded benchmark passes, 2 otherwise, 1 on unknown suite.
int cmd_bench(const std::string& suite, const RunConfig& rc);

}  // namespace exalm
