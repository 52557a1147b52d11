#include "exalm/auglag.hpp"

#include <cmath>

namespace exalm {

namespace {

double sq(double v) { return v * v; }

struct IneqData {
  Vec g;                  // g(x)
  Vec M;                  // max(g_i, -(p/c) mu_i)
  std::vector<bool> on_g; // branch indicator (ties resolved toward g)
  double p = 1.0;         // 1/(1+|mu|^2)
};

IneqData ineq_data(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  IneqData out;
  if (p.ineq_count == 0) return out;
  out.g = p.ineq(x);
  if (static_cast<int>(out.g.size()) != p.ineq_count)
    throw std::runtime_error("inequality oracle returned wrong length");
  double mu2 = 0.0;
  for (double m : d.mu) mu2 += m * m;
  out.p = 1.0 / (1.0 + mu2);
  out.M.resize(out.g.size());
  out.on_g.resize(out.g.size());
  for (std::size_t i = 0; i < out.g.size(); ++i) {
    const double slack = -(out.p / d.c) * d.mu[i];
    out.on_g[i] = out.g[i] >= slack;
    out.M[i] = out.on_g[i] ? out.g[i] : slack;
  }
  return out;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite oracle output in ") + what);
}

}  // namespace

double classical_lagrangian(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  p.validate_point(x);
  p.validate_dual(d);
  double value = p.f(x);
  if (p.has_equalities()) value += p.eq_space.dot(d.lambda, p.eq(x));
  if (p.ineq_count > 0) {
    Vec g = p.ineq(x);
    for (int i = 0; i < p.ineq_count; ++i) value += d.mu[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
  }
  check_finite(value, "classical lagrangian");
  return value;
}

Vec classical_lagrangian_gradient_x(const ConstrainedProblem& p, const Vec& x, const Vec& lambda,
                                    const Vec& mu) {
  Vec w = p.grad_f(x);
  if (p.has_equalities()) add_to(w, p.eq_adj(x, lambda));
  for (int i = 0; i < p.ineq_count; ++i)
    if (mu[static_cast<std::size_t>(i)] != 0.0) axpy(mu[static_cast<std::size_t>(i)], p.ineq_grad(x, i), w);
  return w;
}

double kkt_penalty(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  p.validate_point(x);
  p.validate_dual(d);
  const Vec w = classical_lagrangian_gradient_x(p, x, d.lambda, d.mu);
  double eta = 0.0;
  if (p.has_equalities()) {
    Vec dfw = p.eq_jvp(x, w);
    eta += 0.5 * p.eq_space.dot(dfw, dfw);
  }
  if (p.ineq_count > 0) {
    Vec g = p.ineq(x);
    for (int i = 0; i < p.ineq_count; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      eta += 0.5 * sq(p.x_space.dot(p.ineq_grad(x, i), w) + sq(g[ii]) * d.mu[ii]);
    }
  }
  check_finite(eta, "kkt penalty");
  return eta;
}

AugLagParts augmented_lagrangian_parts(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  p.validate_point(x);
  p.validate_dual(d);
  AugLagParts parts;
  parts.f = p.f(x);
  check_finite(parts.f, "objective");
  double value = parts.f;
  if (p.has_equalities()) {
    const Vec F = p.eq(x);
    const double F2 = p.eq_space.dot(F, F);
    parts.feas_eq = std::sqrt(F2);
    value += p.eq_space.dot(d.lambda, F);
    value += 0.5 * d.c * (1.0 + p.eq_space.dot(d.lambda, d.lambda)) * F2;
  }
  if (p.ineq_count > 0) {
    const IneqData q = ineq_data(p, x, d);
    double MdotMu = 0.0, M2 = 0.0, viol2 = 0.0;
    for (int i = 0; i < p.ineq_count; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      MdotMu += d.mu[ii] * q.M[ii];
      M2 += sq(q.M[ii]);
      viol2 += sq(std::max(q.g[ii], 0.0));
    }
    parts.feas_ineq = std::sqrt(viol2);
    value += MdotMu + 0.5 * d.c / q.p * M2;
  }
  parts.eta = kkt_penalty(p, x, d);
  value += parts.eta;
  check_finite(value, "augmented lagrangian");
  parts.value = value;
  return parts;
}

double augmented_lagrangian(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  return augmented_lagrangian_parts(p, x, d).value;
}

double penalty_value(const ConstrainedProblem& p, const Vec& x, double c) {
  if (c <= 0.0) throw std::invalid_argument("penalty_value: c must be positive");
  p.validate_point(x);
  double value = p.f(x);
  if (p.has_equalities()) {
    const Vec F = p.eq(x);
    value += c * p.eq_space.dot(F, F);
  }
  if (p.ineq_count > 0) {
    const Vec g = p.ineq(x);
    for (double gi : g) value += c * sq(std::max(gi, 0.0));
  }
  return value;
}

KKTResidual kkt_residual(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  p.validate_point(x);
  p.validate_dual(d);
  KKTResidual r;
  r.stationarity = p.x_space.norm(classical_lagrangian_gradient_x(p, x, d.lambda, d.mu));
  if (p.has_equalities()) r.feasibility_eq = p.eq_space.norm(p.eq(x));
  if (p.ineq_count > 0) {
    const Vec g = p.ineq(x);
    for (int i = 0; i < p.ineq_count; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      r.feasibility_ineq = std::max(r.feasibility_ineq, std::max(g[ii], 0.0));
      r.complementarity = std::max(r.complementarity, std::abs(d.mu[ii] * g[ii]));
      r.sign = std::max(r.sign, std::max(-d.mu[ii], 0.0));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gradient of the augmented Lagrangian.

namespace {

AugLagGradient analytic_gradient(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  if (!p.has_second_order())
    throw std::invalid_argument("analytic gradient requested without second-order oracles");

  const Vec w = classical_lagrangian_gradient_x(p, x, d.lambda, d.mu);
  const IneqData q = ineq_data(p, x, d);

  Vec F, psi;
  if (p.has_equalities()) {
    F = p.eq(x);
    psi = p.eq_jvp(x, w);  // DF[grad_x L]
  }

  // tau_i = <grad g_i, w> + g_i^2 mu_i  (the bracket inside eta)
  Vec tau(static_cast<std::size_t>(p.ineq_count), 0.0);
  std::vector<Vec> gg(static_cast<std::size_t>(p.ineq_count));
  for (int i = 0; i < p.ineq_count; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    gg[ii] = p.ineq_grad(x, i);
    tau[ii] = p.x_space.dot(gg[ii], w) + sq(q.g[ii]) * d.mu[ii];
  }

  // s = DF* psi + sum_i tau_i grad g_i  (recurring combination)
  Vec s(p.x_space.dim(), 0.0);
  if (p.has_equalities()) s = p.eq_adj(x, psi);
  for (int i = 0; i < p.ineq_count; ++i) axpy(tau[static_cast<std::size_t>(i)], gg[static_cast<std::size_t>(i)], s);

  // --- x block ---
  Vec gx = p.grad_f(x);
  if (p.has_equalities()) {
    add_to(gx, p.eq_adj(x, d.lambda));
    const double lam2 = p.eq_space.dot(d.lambda, d.lambda);
    axpy(d.c * (1.0 + lam2), p.eq_adj(x, F), gx);
  }
  for (int i = 0; i < p.ineq_count; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    // mu_i + (c/p) M_i vanishes identically on the slack branch
    if (q.on_g[ii]) axpy(d.mu[ii] + (d.c / q.p) * q.g[ii], gg[ii], gx);
  }
  // eta part
  add_to(gx, p.lagr_hvp(x, d.lambda, d.mu, s));
  if (p.has_equalities()) add_to(gx, p.eq_adj_dir(x, psi, w));
  for (int i = 0; i < p.ineq_count; ++i) {
    const std::size_t ii = static_cast<std::size_t>(i);
    if (tau[ii] != 0.0) {
      axpy(tau[ii], p.ineq_hvp(x, i, w), gx);
      axpy(2.0 * tau[ii] * q.g[ii] * d.mu[ii], gg[ii], gx);
    }
  }
  gx = p.apply_project(std::move(gx));

  // --- lambda block ---
  Vec gl;
  if (p.has_equalities()) {
    gl = F;
    const double F2 = p.eq_space.dot(F, F);
    axpy(d.c * F2, d.lambda, gl);
    add_to(gl, p.eq_jvp(x, s));
  }

  // --- mu block ---
  Vec gm(static_cast<std::size_t>(p.ineq_count), 0.0);
  if (p.ineq_count > 0) {
    double M2 = 0.0;
    for (double m : q.M) M2 += sq(m);
    for (int j = 0; j < p.ineq_count; ++j) {
      const std::size_t jj = static_cast<std::size_t>(j);
      double v = q.M[jj] + d.c * d.mu[jj] * M2;
      if (p.has_equalities()) v += p.eq_space.dot(psi, p.eq_jvp(x, gg[jj]));
      for (int i = 0; i < p.ineq_count; ++i)
        v += tau[static_cast<std::size_t>(i)] * p.x_space.dot(gg[static_cast<std::size_t>(i)], gg[jj]);
      v += tau[jj] * sq(q.g[jj]);
      gm[jj] = v;
    }
  }

  return {std::move(gx), std::move(gl), std::move(gm)};
}

AugLagGradient fd_gradient(const ConstrainedProblem& p, const Vec& x, const DualState& d) {
  const auto central = [&](Vec& block, const WeightedSpace& space, auto&& evalAt) {
    const double step = 1e-6 * (1.0 + space.norm(block));
    Vec grad(block.size(), 0.0);
    for (std::size_t k = 0; k < block.size(); ++k) {
      const double saved = block[k];
      block[k] = saved + step;
      const double hi = evalAt();
      block[k] = saved - step;
      const double lo = evalAt();
      block[k] = saved;
      grad[k] = (hi - lo) / (2.0 * step * space.weights[k]);
    }
    return grad;
  };

  Vec xv = x;
  DualState dv = d;
  AugLagGradient g;
  g.x = central(xv, p.x_space, [&] { return augmented_lagrangian(p, xv, dv); });
  g.x = p.apply_project(std::move(g.x));
  if (p.has_equalities())
    g.lambda = central(dv.lambda, p.eq_space, [&] { return augmented_lagrangian(p, xv, dv); });
  if (p.ineq_count > 0) {
    WeightedSpace mu_space = WeightedSpace::euclidean(static_cast<std::size_t>(p.ineq_count));
    g.mu = central(dv.mu, mu_space, [&] { return augmented_lagrangian(p, xv, dv); });
  } else {
    g.mu.clear();
  }
  return g;
}

}  // namespace

AugLagGradient augmented_lagrangian_gradient(const ConstrainedProblem& p, const Vec& x,
                                             const DualState& d, GradMode mode) {
  p.validate_point(x);
  p.validate_dual(d);
  return mode == GradMode::Analytic ? analytic_gradient(p, x, d) : fd_gradient(p, x, d);
}

// ---------------------------------------------------------------------------
// Q form and sigma_max.

QForm q_form(const ConstrainedProblem& p, const Vec& x) {
  p.validate_point(x);
  QForm q;
  q.lambda_dim = p.eq_space.dim();
  q.mu_dim = p.ineq_count;

  Vec g(static_cast<std::size_t>(p.ineq_count), 0.0);
  std::vector<Vec> gg(static_cast<std::size_t>(p.ineq_count));
  if (p.ineq_count > 0) {
    g = p.ineq(x);
    for (int i = 0; i < p.ineq_count; ++i) gg[static_cast<std::size_t>(i)] = p.ineq_grad(x, i);
  }

  // The closures hold the problem by pointer; the form must not outlive it.
  const ConstrainedProblem* pp = &p;

  auto r_of = [pp, x, gg](const Vec& lambda, const Vec& mu) {
    Vec r(pp->x_space.dim(), 0.0);
    if (pp->has_equalities()) r = pp->eq_adj(x, lambda);
    for (std::size_t i = 0; i < gg.size(); ++i) axpy(mu[i], gg[i], r);
    return r;
  };

  q.eval = [pp, x, g, gg, r_of](const Vec& lambda, const Vec& mu) {
    const Vec r = r_of(lambda, mu);
    double out = 0.0;
    if (pp->has_equalities()) {
      Vec dfr = pp->eq_jvp(x, r);
      out += 0.5 * pp->eq_space.dot(dfr, dfr);
    }
    for (std::size_t i = 0; i < gg.size(); ++i)
      out += 0.5 * sq(pp->x_space.dot(gg[i], r) + sq(g[i]) * mu[i]);
    return out;
  };

  // E_Q action from the polarization of Q (Q[z] = <z, E z>).
  q.apply = [pp, x, g, gg, r_of](const Vec& lambda, const Vec& mu) {
    const Vec r = r_of(lambda, mu);
    Vec psi;
    Vec a(gg.size(), 0.0);
    if (pp->has_equalities()) psi = pp->eq_jvp(x, r);
    for (std::size_t i = 0; i < gg.size(); ++i) a[i] = pp->x_space.dot(gg[i], r) + sq(g[i]) * mu[i];
    Vec s(pp->x_space.dim(), 0.0);
    if (pp->has_equalities()) s = pp->eq_adj(x, psi);
    for (std::size_t i = 0; i < gg.size(); ++i) axpy(a[i], gg[i], s);
    Vec out_l;
    if (pp->has_equalities()) out_l = scaled_copy(0.5, pp->eq_jvp(x, s));
    Vec out_m(gg.size(), 0.0);
    for (std::size_t j = 0; j < gg.size(); ++j)
      out_m[j] = 0.5 * (pp->x_space.dot(gg[j], s) + a[j] * sq(g[j]));
    return std::make_pair(std::move(out_l), std::move(out_m));
  };

  // Assemble E_Q in an orthonormalized basis for finite multiplier vectors.
  if (!p.eq_multiplier_on_grid) {
    const std::size_t nl = q.lambda_dim;
    const std::size_t nm = static_cast<std::size_t>(q.mu_dim);
    const std::size_t n = nl + nm;
    Eigen::MatrixXd E(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Vec lambda(nl, 0.0), mu(nm, 0.0);
      // orthonormal basis vector w.r.t. the weighted metric
      if (j < nl)
        lambda[j] = 1.0 / std::sqrt(p.eq_space.weights[j]);
      else
        mu[j - nl] = 1.0;
      auto [el, em] = q.apply(lambda, mu);
      for (std::size_t i = 0; i < nl; ++i)
        E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = el[i] * std::sqrt(p.eq_space.weights[i]);
      for (std::size_t i = 0; i < nm; ++i)
        E(static_cast<Eigen::Index>(nl + i), static_cast<Eigen::Index>(j)) = em[i];
    }
    q.matrix = Eigen::MatrixXd(0.5 * (E + E.transpose()));  // symmetrize away roundoff
  }
  return q;
}

SigmaEstimate estimate_sigma_max(const ConstrainedProblem& p, const QForm& q, double tol,
                                 int max_iterations) {
  if (tol <= 0.0) throw std::invalid_argument("estimate_sigma_max: tol must be positive");
  SigmaEstimate est;
  if (q.matrix) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*q.matrix, Eigen::EigenvaluesOnly);
    est.value = q.matrix->rows() > 0 ? std::max(0.0, es.eigenvalues()(0)) : 0.0;
    est.converged = true;
    return est;
  }

  // Operator path (grid-valued multipliers): power iteration for the largest
  // eigenvalue, then a shifted power iteration for the smallest.
  const std::size_t nl = q.lambda_dim;
  const std::size_t nm = static_cast<std::size_t>(q.mu_dim);
  auto dot_z = [&](const std::pair<Vec, Vec>& a, const std::pair<Vec, Vec>& b) {
    double s = 0.0;
    if (nl > 0) s += p.eq_space.dot(a.first, b.first);
    for (std::size_t i = 0; i < nm; ++i) s += a.second[i] * b.second[i];
    return s;
  };
  auto normalize = [&](std::pair<Vec, Vec>& z) {
    const double n = std::sqrt(dot_z(z, z));
    if (n == 0.0) return false;
    for (double& v : z.first) v /= n;
    for (double& v : z.second) v /= n;
    return true;
  };

  // deterministic, non-degenerate start
  std::pair<Vec, Vec> z{Vec(nl, 0.0), Vec(nm, 0.0)};
  for (std::size_t i = 0; i < nl; ++i) z.first[i] = 1.0 + 0.37 * std::sin(1.0 + 2.1 * static_cast<double>(i));
  for (std::size_t i = 0; i < nm; ++i) z.second[i] = 1.0 + 0.41 * std::cos(0.5 + 1.7 * static_cast<double>(i));
  if (!normalize(z)) return {0.0, true, 0};

  auto power = [&](auto&& apply_op) -> std::pair<double, int> {
    double rayleigh = 0.0;
    std::pair<Vec, Vec> y = z;
    for (int it = 1; it <= max_iterations; ++it) {
      std::pair<Vec, Vec> w = apply_op(y);
      const double rq = dot_z(y, w);
      std::pair<Vec, Vec> next = std::move(w);
      if (!normalize(next)) return {0.0, it};  // operator annihilated the iterate
      const bool done = std::abs(rq - rayleigh) < tol * std::max(1.0, std::abs(rq));
      rayleigh = rq;
      y = std::move(next);
      if (done && it > 2) return {rayleigh, it};
    }
    return {rayleigh, -max_iterations};
  };

  auto applyE = [&](const std::pair<Vec, Vec>& y) { return q.apply(y.first, y.second); };
  auto [lam_max, it1] = power(applyE);
  if (lam_max <= 0.0) return {0.0, it1 > 0, std::abs(it1)};
  const double shift = lam_max * 1.01;
  auto applyShifted = [&](const std::pair<Vec, Vec>& y) {
    auto Ey = q.apply(y.first, y.second);
    std::pair<Vec, Vec> out = y;
    for (std::size_t i = 0; i < nl; ++i) out.first[i] = shift * y.first[i] - Ey.first[i];
    for (std::size_t i = 0; i < nm; ++i) out.second[i] = shift * y.second[i] - Ey.second[i];
    return out;
  };
  auto [shifted_max, it2] = power(applyShifted);
  est.value = std::max(0.0, shift - shifted_max);
  est.converged = it1 > 0 && it2 > 0;
  est.iterations = std::abs(it1) + std::abs(it2);
  return est;
}

double adjoint_mismatch(const ConstrainedProblem& p, const Vec& x, const Vec& w, const Vec& lambda) {
  if (!p.has_equalities()) return 0.0;
  const double lhs = p.eq_space.dot(p.eq_jvp(x, w), lambda);
  const double rhs = p.x_space.dot(w, p.eq_adj(x, lambda));
  return std::abs(lhs - rhs);
}

}  // namespace exalm
