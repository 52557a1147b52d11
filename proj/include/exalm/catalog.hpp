#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "exalm/boundary.hpp"
#include "exalm/isoperimetric.hpp"
#include "exalm/nonholonomic.hpp"
#include "exalm/optimal_control.hpp"
#include "exalm/solver.hpp"

namespace exalm {

struct BenchmarkOracle {
  Vec x;
  DualState dual;   // c is filled by the consumer
  double value = 0.0;
};

/// A catalog entry: assembled problem, default init, the benchmark's
/// independent oracle, solver defaults, error metrics with bench bounds, and
/// artifact writers. `owner` keeps the family spec alive for the oracle
/// closures inside `problem`.
struct Benchmark {
  std::string id;
  std::string family;
  std::string description;
  ConstrainedProblem problem;
  Vec init_x;
  DualState init_dual;
  std::optional<BenchmarkOracle> oracle;
  SolverConfig solver;
  std::vector<double> sweep_c;
  std::map<std::string, double> info;  // e.g. gramian_lambda_min, gramian_cond
  std::function<std::map<std::string, double>(const Vec&, const DualState&)> metrics;
  std::map<std::string, double> bounds;  // metric name -> max allowed (empty: probe only)
  std::function<void(const Vec&, const std::string&)> write_solution;
  std::shared_ptr<void> owner;

  bool is_probe() const { return bounds.empty(); }
};

using Params = std::map<std::string, double>;

/// Benchmarks run by `bench`.
std::vector<std::string> catalog_ids();

/// Degenerate fixtures for `check` demonstrations (not part of bench suites).
std::vector<std::string> fixture_ids();

bool catalog_has(const std::string& id);

/// Throws std::invalid_argument for unknown ids.
Benchmark make_benchmark(const std::string& id, const Params& params = {});

}  // namespace exalm
