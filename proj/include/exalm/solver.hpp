#pragma once

#include <optional>
#include <string>

#include "exalm/auglag.hpp"
#include "exalm/problem.hpp"

namespace exalm {

struct SolverConfig {
  enum class Method { GradientDescent, LBFGS };
  Method method = Method::LBFGS;
  int lbfgs_memory = 10;
  int max_inner_iterations = 5000;
  double gradient_tol = 1e-8;  // inner stop: ||grad L_c|| <= tol * max(1, ||(x,l,m)||)
  double kkt_tol = 1e-8;       // overall stop on the KKT residual
  double armijo_decrease = 1e-4;
  double backtrack = 0.5;
  int max_line_search = 60;
  double c0 = 1.0;
  double c_growth = 10.0;         // tau
  double violation_shrink = 0.25; // rho
  int max_outer_rounds = 8;
  GradMode grad_mode = GradMode::Analytic;
  bool audit_first = false;  // FD-vs-analytic audit at the initial point
  double audit_tol = 1e-6;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, LineSearchFailure };

std::string to_string(SolveStatus s);

struct IterateRow {
  int iteration = 0;
  double L = 0.0;
  double f = 0.0;
  double feas_eq = 0.0;
  double feas_ineq = 0.0;
  double eta = 0.0;
  KKTResidual kkt;
  double c = 0.0;
  double step = 0.0;
};

struct SolveResult {
  Vec x;
  DualState dual;
  SolveStatus status = SolveStatus::MaxIterations;
  KKTResidual final_kkt;
  std::vector<IterateRow> log;
  double sigma_max = 0.0;
  bool sigma_converged = false;
  int inner_iterations = 0;
  int outer_rounds = 0;
  double wall_seconds = 0.0;
};

/// Joint unconstrained minimization of the exact augmented Lagrangian over
/// (x, lambda, mu), with the penalty-parameter safeguard loop: after each
/// inner solve the constraint violation theta = ||F||^2 + |max(g,0)|^2 is
/// compared against rho * theta_prev; insufficient progress grows c by tau
/// and re-solves warm-started. Deterministic for fixed config and init.
SolveResult minimize_auglag(const ConstrainedProblem& p, const Vec& x0, const DualState& dual0,
                            const SolverConfig& cfg);

struct SweepRow {
  double c = 0.0;
  double min_L = 0.0;
  double gap = 0.0;  // min_L - oracle optimal value
  bool converged = false;
  KKTResidual kkt;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> threshold_c;  // first c with a converged solve and |gap| <= tol
  double oracle_value = 0.0;
};

/// One fixed-c solve per entry of c_list (ascending, positive), each from the
/// given init; records min L against the oracle optimal value and flags the
/// empirical exactness threshold.
SweepResult exactness_sweep(const ConstrainedProblem& p, const Vec& x0, const DualState& dual0,
                            const std::vector<double>& c_list, double oracle_value,
                            const SolverConfig& cfg, double gap_tol = 1e-2);

struct AuditRow {
  int point = 0;
  char block = 'x';  // 'x', 'l', 'm'
  double rel_error = 0.0;
  bool pass = true;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  double worst = 0.0;
  bool pass = true;
};

/// Central-FD vs analytic gradient of L_c, per point and per block.
AuditReport audit_gradients(const ConstrainedProblem& p,
                            const std::vector<std::pair<Vec, DualState>>& points, double tol);

}  // namespace exalm
