#include "exalm/solver.hpp"

#include <chrono>
#include <cmath>
#include <deque>

namespace exalm {

void SolverConfig::validate() const {
  if (lbfgs_memory < 1 || max_inner_iterations < 1 || max_outer_rounds < 1 || max_line_search < 1)
    throw std::invalid_argument("solver config: iteration limits must be positive");
  if (gradient_tol <= 0 || kkt_tol <= 0 || armijo_decrease <= 0 || audit_tol <= 0)
    throw std::invalid_argument("solver config: tolerances must be positive");
  if (!(backtrack > 0 && backtrack < 1))
    throw std::invalid_argument("solver config: backtrack factor must lie in (0,1)");
  if (c0 <= 0 || c_growth <= 1.0)
    throw std::invalid_argument("solver config: c0 > 0 and growth > 1 required");
  if (!(violation_shrink > 0 && violation_shrink < 1))
    throw std::invalid_argument("solver config: violation shrink must lie in (0,1)");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iter";
    case SolveStatus::LineSearchFailure: return "line-search-failure";
  }
  return "unknown";
}

namespace {

// Joint iterate over (x, lambda, mu) with the blockwise inner product.
struct Joint {
  Vec x, lambda, mu;
};

struct JointOps {
  const ConstrainedProblem* p;

  double dot(const Joint& a, const Joint& b) const {
    double s = p->x_space.dot(a.x, b.x);
    if (p->has_equalities()) s += p->eq_space.dot(a.lambda, b.lambda);
    for (std::size_t i = 0; i < a.mu.size(); ++i) s += a.mu[i] * b.mu[i];
    return s;
  }
  double norm(const Joint& a) const { return std::sqrt(dot(a, a)); }
  static void axpy_joint(double t, const Joint& d, Joint& z) {
    axpy(t, d.x, z.x);
    axpy(t, d.lambda, z.lambda);
    axpy(t, d.mu, z.mu);
  }
  static Joint diff(const Joint& a, const Joint& b) {
    Joint d = a;
    axpy(-1.0, b.x, d.x);
    axpy(-1.0, b.lambda, d.lambda);
    axpy(-1.0, b.mu, d.mu);
    return d;
  }
  static Joint scale(double t, Joint a) {
    for (double& v : a.x) v *= t;
    for (double& v : a.lambda) v *= t;
    for (double& v : a.mu) v *= t;
    return a;
  }
};

Joint joint_gradient(const ConstrainedProblem& p, const Joint& z, double c, GradMode mode) {
  DualState d{z.lambda, z.mu, c};
  AugLagGradient g = augmented_lagrangian_gradient(p, z.x, d, mode);
  Joint out;
  out.x = std::move(g.x);
  out.lambda = p.has_equalities() ? std::move(g.lambda) : Vec{};
  out.mu = std::move(g.mu);
  if (out.lambda.size() != z.lambda.size()) out.lambda.assign(z.lambda.size(), 0.0);
  if (out.mu.size() != z.mu.size()) out.mu.assign(z.mu.size(), 0.0);
  return out;
}

struct InnerOutcome {
  bool stationary = false;
  bool line_search_failed = false;
  bool kkt_met = false;
};

// L-BFGS / gradient descent with Armijo backtracking at fixed c. Appends one
// log row per accepted step; every accepted step strictly decreases L.
InnerOutcome inner_solve(const ConstrainedProblem& p, Joint& z, double c, const SolverConfig& cfg,
                         std::vector<IterateRow>& log, int& iter_counter) {
  const JointOps ops{&p};
  std::deque<std::pair<Joint, Joint>> memory;  // (s, y) pairs
  const bool lbfgs = cfg.method == SolverConfig::Method::LBFGS;

  auto value = [&](const Joint& zz) {
    DualState d{zz.lambda, zz.mu, c};
    return augmented_lagrangian(p, zz.x, d);
  };
  auto log_row = [&](const Joint& zz, double step) {
    DualState d{zz.lambda, zz.mu, c};
    AugLagParts parts = augmented_lagrangian_parts(p, zz.x, d);
    IterateRow row;
    row.iteration = iter_counter;
    row.L = parts.value;
    row.f = parts.f;
    row.feas_eq = parts.feas_eq;
    row.feas_ineq = parts.feas_ineq;
    row.eta = parts.eta;
    row.kkt = kkt_residual(p, zz.x, d);
    row.c = c;
    row.step = step;
    log.push_back(row);
    return row.kkt.max() <= cfg.kkt_tol;
  };

  double L = value(z);
  Joint grad = joint_gradient(p, z, c, cfg.grad_mode);
  if (log.empty() && log_row(z, 0.0)) return {true, false, true};

  double prev_step = 1.0;
  for (int it = 0; it < cfg.max_inner_iterations; ++it) {
    const double gnorm = ops.norm(grad);
    if (gnorm <= cfg.gradient_tol * std::max(1.0, ops.norm(z))) return {true, false, false};

    // search direction
    Joint dir = JointOps::scale(-1.0, grad);
    if (lbfgs && !memory.empty()) {
      // two-loop recursion in the blockwise inner product
      std::vector<double> alpha(memory.size());
      std::vector<double> rho(memory.size());
      Joint qv = grad;
      for (std::size_t i = memory.size(); i-- > 0;) {
        const auto& [s, y] = memory[i];
        rho[i] = 1.0 / ops.dot(y, s);
        alpha[i] = rho[i] * ops.dot(s, qv);
        JointOps::axpy_joint(-alpha[i], y, qv);
      }
      const auto& [s_last, y_last] = memory.back();
      const double gamma = ops.dot(s_last, y_last) / ops.dot(y_last, y_last);
      Joint r = JointOps::scale(gamma, qv);
      for (std::size_t i = 0; i < memory.size(); ++i) {
        const auto& [s, y] = memory[i];
        const double beta = rho[i] * ops.dot(y, r);
        JointOps::axpy_joint(alpha[i] - beta, s, r);
      }
      dir = JointOps::scale(-1.0, r);
    }

    double slope = ops.dot(grad, dir);
    if (slope >= 0.0) {  // not a descent direction: reset to steepest descent
      memory.clear();
      dir = JointOps::scale(-1.0, grad);
      slope = -gnorm * gnorm;
    }

    // Armijo backtracking
    double step = lbfgs ? 1.0 : std::min(1.0, 2.0 * prev_step);
    bool accepted = false;
    Joint trial;
    double L_trial = 0.0;
    for (int ls = 0; ls < cfg.max_line_search; ++ls) {
      trial = z;
      JointOps::axpy_joint(step, dir, trial);
      if (p.project) trial.x = p.project(std::move(trial.x));
      L_trial = value(trial);
      if (L_trial <= L + cfg.armijo_decrease * step * slope) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted) return {false, true, false};

    Joint grad_new = joint_gradient(p, trial, c, cfg.grad_mode);
    if (lbfgs) {
      Joint s = JointOps::diff(trial, z);
      Joint y = JointOps::diff(grad_new, grad);
      const double sy = ops.dot(s, y);
      if (sy > 1e-12 * ops.norm(s) * ops.norm(y)) {
        memory.emplace_back(std::move(s), std::move(y));
        if (static_cast<int>(memory.size()) > cfg.lbfgs_memory) memory.pop_front();
      }
    }
    z = std::move(trial);
    L = L_trial;
    grad = std::move(grad_new);
    prev_step = step;
    ++iter_counter;
    if (log_row(z, step)) return {false, false, true};  // KKT residual already met
  }
  return {false, false, false};
}

double violation(const ConstrainedProblem& p, const Vec& x) {
  double theta = 0.0;
  if (p.has_equalities()) {
    const Vec F = p.eq(x);
    theta += p.eq_space.dot(F, F);
  }
  if (p.ineq_count > 0) {
    const Vec g = p.ineq(x);
    for (double gi : g) theta += std::pow(std::max(gi, 0.0), 2);
  }
  return theta;
}

}  // namespace

SolveResult minimize_auglag(const ConstrainedProblem& p, const Vec& x0, const DualState& dual0,
                            const SolverConfig& cfg) {
  cfg.validate();
  p.validate_point(x0);
  const auto t0 = std::chrono::steady_clock::now();

  if (cfg.audit_first) {
    AuditReport audit = audit_gradients(p, {{x0, DualState{dual0.lambda, dual0.mu, cfg.c0}}}, cfg.audit_tol);
    if (!audit.pass)
      throw std::runtime_error("gradient audit failed at the initial point (worst rel error " +
                               std::to_string(audit.worst) + ")");
  }

  SolveResult res;
  Joint z{p.apply_project(x0), dual0.lambda, dual0.mu};
  double c = cfg.c0;
  double theta_prev = violation(p, z.x);
  int iter_counter = 0;
  InnerOutcome last{};
  double kkt_best = std::numeric_limits<double>::infinity();
  bool bumped_without_progress = false;

  for (int round = 0; round < cfg.max_outer_rounds; ++round) {
    res.outer_rounds = round + 1;
    last = inner_solve(p, z, c, cfg, res.log, iter_counter);
    DualState d{z.lambda, z.mu, c};
    res.final_kkt = kkt_residual(p, z.x, d);
    if (res.final_kkt.max() <= cfg.kkt_tol) {
      res.status = SolveStatus::Converged;
      break;
    }
    res.status = last.line_search_failed ? SolveStatus::LineSearchFailure : SolveStatus::MaxIterations;
    if (res.final_kkt.max() < 0.5 * kkt_best) {
      kkt_best = res.final_kkt.max();
      bumped_without_progress = false;
    } else if (bumped_without_progress && last.line_search_failed) {
      // growing c already failed to move the KKT residual: the iterate sits
      // at the floating-point floor of L
      break;
    }
    const double theta = violation(p, z.x);
    if (theta > cfg.violation_shrink * theta_prev) {
      c *= cfg.c_growth;
      bumped_without_progress = true;
    }
    theta_prev = theta;
  }

  res.x = z.x;
  res.dual = DualState{z.lambda, z.mu, c};
  res.inner_iterations = iter_counter;

  QForm q = q_form(p, res.x);
  SigmaEstimate sigma = estimate_sigma_max(p, q, 1e-8);
  res.sigma_max = sigma.value;
  res.sigma_converged = sigma.converged;

  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

SweepResult exactness_sweep(const ConstrainedProblem& p, const Vec& x0, const DualState& dual0,
                            const std::vector<double>& c_list, double oracle_value,
                            const SolverConfig& cfg, double gap_tol) {
  if (c_list.empty()) throw std::invalid_argument("exactness_sweep: empty c list");
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    if (c_list[i] <= 0.0) throw std::invalid_argument("exactness_sweep: c values must be positive");
    if (i > 0 && c_list[i] <= c_list[i - 1])
      throw std::invalid_argument("exactness_sweep: c list must be ascending");
  }
  SweepResult out;
  out.oracle_value = oracle_value;
  for (double c : c_list) {
    SolverConfig one = cfg;
    one.c0 = c;
    one.max_outer_rounds = 1;  // single fixed-c solve
    SolveResult r = minimize_auglag(p, x0, dual0, one);
    SweepRow row;
    row.c = c;
    row.min_L = r.log.empty() ? 0.0 : r.log.back().L;
    row.gap = row.min_L - oracle_value;
    row.converged = r.status == SolveStatus::Converged;
    row.kkt = r.final_kkt;
    out.rows.push_back(row);
    if (!out.threshold_c && row.converged && std::abs(row.gap) <= gap_tol) out.threshold_c = c;
  }
  return out;
}

AuditReport audit_gradients(const ConstrainedProblem& p,
                            const std::vector<std::pair<Vec, DualState>>& points, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("audit_gradients: tol must be positive");
  AuditReport report;
  auto rel = [](const Vec& a, const Vec& b, const WeightedSpace& space) {
    Vec d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    const double na = space.norm(a), nb = space.norm(b);
    const double scale = std::max({na, nb, 1e-8});
    return space.norm(d) / scale;
  };
  int idx = 0;
  for (const auto& [x, dual] : points) {
    AugLagGradient an = augmented_lagrangian_gradient(p, x, dual, GradMode::Analytic);
    AugLagGradient fd = augmented_lagrangian_gradient(p, x, dual, GradMode::FiniteDifference);
    const WeightedSpace mu_space = WeightedSpace::euclidean(static_cast<std::size_t>(p.ineq_count));
    const double ex = rel(an.x, fd.x, p.x_space);
    report.rows.push_back({idx, 'x', ex, ex <= tol});
    if (p.has_equalities()) {
      const double el = rel(an.lambda, fd.lambda, p.eq_space);
      report.rows.push_back({idx, 'l', el, el <= tol});
    }
    if (p.ineq_count > 0) {
      const double em = rel(an.mu, fd.mu, mu_space);
      report.rows.push_back({idx, 'm', em, em <= tol});
    }
    ++idx;
  }
  for (const auto& row : report.rows) {
    report.worst = std::max(report.worst, row.rel_error);
    report.pass = report.pass && row.pass;
  }
  return report;
}

}  // namespace exalm
