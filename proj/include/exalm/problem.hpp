#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "exalm/kernels.hpp"

namespace exalm {

using Vec = std::vector<double>;

/// Coefficient space with a diagonal inner-product weight: 1 for Euclidean
/// coordinates, cell volumes for L2 grid samples. A zero-dimensional space
/// is allowed (no equality constraints).
struct WeightedSpace {
  Vec weights;

  static WeightedSpace euclidean(std::size_t n) { return {Vec(n, 1.0)}; }
  static WeightedSpace scaled(std::size_t n, double w) { return {Vec(n, w)}; }

  std::size_t dim() const { return weights.size(); }

  bool is_euclidean() const {
    return std::all_of(weights.begin(), weights.end(), [](double w) { return w == 1.0; });
  }

  double dot(const Vec& a, const Vec& b) const {
    check(a); check(b);
    return kern::dot_weighted(a.data(), b.data(), weights.data(), weights.size());
  }

  double norm(const Vec& a) const { return std::sqrt(dot(a, a)); }

  void check(const Vec& a) const {
    if (a.size() != weights.size()) throw std::invalid_argument("weighted space: size mismatch");
  }
};

/// Lagrange multipliers and penalty parameter: lambda for the equality map,
/// mu for the inequalities (sign unconstrained: the method minimizes over
/// all of R^m), c > 0.
struct DualState {
  Vec lambda;
  Vec mu;
  double c = 1.0;
};

struct KKTResidual {
  double stationarity = 0.0;      // ||grad_x L(x, lambda, mu)||
  double feasibility_eq = 0.0;    // ||F(x)||
  double feasibility_ineq = 0.0;  // max_i max(g_i, 0)
  double complementarity = 0.0;   // max_i |mu_i g_i|
  double sign = 0.0;              // max_i max(-mu_i, 0)

  double max() const {
    return std::max({stationarity, feasibility_eq, feasibility_ineq, complementarity, sign});
  }
};

/// Oracle bundle for min f(x) s.t. F(x) = 0, g(x) <= 0 over a discretized
/// Hilbert space. eq_jvp/eq_adj must be mutually adjoint under the space
/// inner products; gradients returned by the oracles already live in the
/// admissible subspace when `project` is present.
struct ConstrainedProblem {
  WeightedSpace x_space;
  WeightedSpace eq_space;  // zero-dim when there is no equality map
  int ineq_count = 0;

  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad_f;
  std::function<Vec(const Vec&)> eq;                   // F(x)
  std::function<Vec(const Vec&, const Vec&)> eq_jvp;   // DF(x)[w]
  std::function<Vec(const Vec&, const Vec&)> eq_adj;   // DF(x)*[lambda]
  std::function<Vec(const Vec&)> ineq;                 // g(x), length m
  std::function<Vec(const Vec&, int)> ineq_grad;       // grad g_i(x)

  // Optional second-order actions; required for the analytic gradient of the
  // KKT-penalty term.
  std::function<Vec(const Vec&, const Vec&, const Vec&, const Vec&)> lagr_hvp;  // H_L(x,l,m)[w]
  std::function<Vec(const Vec&, const Vec&, const Vec&)> eq_adj_dir;  // d/dt DF(x+tw)*[psi] at t=0
  std::function<Vec(const Vec&, int, const Vec&)> ineq_hvp;           // Hess g_i(x)[w]

  // Optional projection onto the admissible subspace (e.g. zero-axis-mean
  // densities); identity when absent.
  std::function<Vec(const Vec&)> project;

  // Grid-valued equality multipliers switch sigma_max estimation to the
  // operator (power-iteration) path.
  bool eq_multiplier_on_grid = false;

  bool has_equalities() const { return eq_space.dim() > 0; }
  bool has_second_order() const {
    return static_cast<bool>(lagr_hvp) && (!has_equalities() || static_cast<bool>(eq_adj_dir)) &&
           (ineq_count == 0 || static_cast<bool>(ineq_hvp));
  }

  Vec apply_project(Vec v) const { return project ? project(std::move(v)) : std::move(v); }

  void validate_point(const Vec& x) const { x_space.check(x); }
  void validate_dual(const DualState& d) const {
    if (d.c <= 0.0) throw std::invalid_argument("dual state: penalty parameter must be positive");
    eq_space.check(d.lambda);
    if (static_cast<int>(d.mu.size()) != ineq_count)
      throw std::invalid_argument("dual state: mu length mismatch");
  }
};

// Small vector helpers shared across the solver and the problem families.
inline void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}
inline Vec scaled_copy(double a, Vec x) {
  for (double& v : x) v *= a;
  return x;
}
inline void add_to(Vec& y, const Vec& x) { axpy(1.0, x, y); }

}  // namespace exalm
