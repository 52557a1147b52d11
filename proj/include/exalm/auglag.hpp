#pragma once

#include <optional>

#include <Eigen/Dense>

#include "exalm/problem.hpp"

namespace exalm {

// Exact augmented Lagrangian of Di Pillo/Grippo type, specialized to
// phi(t) = t and psi = 1, so b = 1, p(x,mu) = 1/(1+|mu|^2) and the domain
// restriction never triggers:
//
//   L_c(x,l,m) = f + <l,F> + c/2 (1+||l||^2) ||F||^2
//              + <m, M> + c/(2p) |M|^2 + eta(x,l,m),
//   M_i = max(g_i, -(p/c) m_i),
//   eta = 1/2 ||DF[grad_x L]||^2 + 1/2 sum_i (<grad g_i, grad_x L> + g_i^2 m_i)^2.

double classical_lagrangian(const ConstrainedProblem& p, const Vec& x, const DualState& d);

/// grad_x of the classical Lagrangian (projected into the admissible
/// subspace by construction of the oracles).
Vec classical_lagrangian_gradient_x(const ConstrainedProblem& p, const Vec& x, const Vec& lambda,
                                    const Vec& mu);

/// The penalty on KKT stationarity (eta >= 0, zero exactly at KKT triples).
double kkt_penalty(const ConstrainedProblem& p, const Vec& x, const DualState& d);

double augmented_lagrangian(const ConstrainedProblem& p, const Vec& x, const DualState& d);

/// The per-term breakdown used by iterate logs and diagnostics.
struct AugLagParts {
  double value = 0.0;
  double f = 0.0;
  double feas_eq = 0.0;    // ||F(x)||
  double feas_ineq = 0.0;  // |max(g,0)|
  double eta = 0.0;
};
AugLagParts augmented_lagrangian_parts(const ConstrainedProblem& p, const Vec& x, const DualState& d);

enum class GradMode { Analytic, FiniteDifference };

struct AugLagGradient {
  Vec x;
  Vec lambda;
  Vec mu;
};

/// Gradient of L_c in all blocks at fixed c. Analytic mode needs the
/// second-order oracles; FD mode central-differences every coordinate with
/// step 1e-6 * (1 + ||block||).
AugLagGradient augmented_lagrangian_gradient(const ConstrainedProblem& p, const Vec& x,
                                             const DualState& d, GradMode mode);

/// f(x) + c (||F||^2 + |max(g,0)|^2); the penalty function behind the
/// sublevel sets Z_c(gamma) and the outer-loop safeguard.
double penalty_value(const ConstrainedProblem& p, const Vec& x, double c);

KKTResidual kkt_residual(const ConstrainedProblem& p, const Vec& x, const DualState& d);

/// The quadratic form in the multipliers that drives exactness:
///   Q(x)[l,m] = 1/2 ||DF[r]||^2 + 1/2 |grad_g r + diag(g_i^2) m|^2,
///   r = DF*[l] + sum_i m_i grad g_i.
struct QForm {
  std::function<double(const Vec&, const Vec&)> eval;              // Q(x)[lambda, mu]
  std::function<std::pair<Vec, Vec>(const Vec&, const Vec&)> apply;  // z -> E_Q z (Q = <z, E z>)
  // Assembled in an orthonormalized multiplier basis when the multiplier
  // space is a finite vector; absent for grid-valued multipliers.
  std::optional<Eigen::MatrixXd> matrix;
  std::size_t lambda_dim = 0;
  int mu_dim = 0;
  double sigma_max_estimate = 0.0;
};

QForm q_form(const ConstrainedProblem& p, const Vec& x);

struct SigmaEstimate {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// sigma_max(Q): smallest eigenvalue of E_Q (finite multipliers, symmetric
/// eigensolver) or a shifted power iteration on the induced operator
/// (grid multipliers), converged when successive Rayleigh quotients differ
/// by less than tol.
SigmaEstimate estimate_sigma_max(const ConstrainedProblem& p, const QForm& q, double tol,
                                 int max_iterations = 5000);

/// |<DF w, lambda> - <w, DF* lambda>| for probing oracle adjoint consistency.
double adjoint_mismatch(const ConstrainedProblem& p, const Vec& x, const Vec& w, const Vec& lambda);

}  // namespace exalm
