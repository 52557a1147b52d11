#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "exalm/function_spaces.hpp"
#include "exalm/problem.hpp"

namespace exalm {

// Variational problems on an interval with nonlinear equality/inequality
// constraints at the boundary, realized over (y, v) through the transition
// into the space of derivatives u = A(y, v).

/// Running-cost integrand f(u, xi, x) on an interval, with callbacks per
/// sample point. Vectors have length d; the optional Hessian action maps a
/// tangent (zu, zxi) to (out_u, out_xi).
struct Integrand1D {
  std::function<double(std::span<const double> u, std::span<const double> xi, double x)> value;
  std::function<void(std::span<const double> u, std::span<const double> xi, double x,
                     std::span<double> du, std::span<double> dxi)> gradient;
  std::function<void(std::span<const double> u, std::span<const double> xi, double x,
                     std::span<const double> zu, std::span<const double> zxi,
                     std::span<double> out_u, std::span<double> out_xi)> hessian_action;
};

/// Scalar function of the boundary pair (u_a, u_b) in R^{2d}.
struct BoundaryFunction {
  std::function<double(std::span<const double> ua, std::span<const double> ub)> value;
  std::function<void(std::span<const double> ua, std::span<const double> ub,
                     std::span<double> dua, std::span<double> dub)> gradient;
  std::function<void(std::span<const double> ua, std::span<const double> ub,
                     std::span<const double> za, std::span<const double> zb,
                     std::span<double> oa, std::span<double> ob)> hessian_action;
};

struct BoundaryProblemSpec {
  double a = 0.0;
  double b = 1.0;
  int d = 1;
  Integrand1D f;              // running cost (value required)
  BoundaryFunction f0;        // boundary cost; null value means 0
  std::vector<BoundaryFunction> equalities;    // f_j(u_a, u_b) = 0
  std::vector<BoundaryFunction> inequalities;  // g_i(u_a, u_b) <= 0

  void validate() const;
};

/// Flat layout of the primal point: x = [y, v] with y in R^d and v the
/// cell-centered derivative samples.
struct BoundaryLayout {
  int d = 1;
  std::size_t cells = 0;
  double h = 0.0;
  std::size_t dim() const { return static_cast<std::size_t>(d) * (1 + cells); }
  std::span<const double> y(const Vec& x) const { return {x.data(), static_cast<std::size_t>(d)}; }
  std::span<const double> v(const Vec& x) const {
    return {x.data() + d, static_cast<std::size_t>(d) * cells};
  }
};

BoundaryLayout boundary_layout(const BoundaryProblemSpec& spec, const Grid& grid);

/// Gradient of the objective over (y, v): grad_y = int grad_u f dx +
/// (grad_ua + grad_ub) f0, grad_v(x) = P[y,v](x) with the tail integral as a
/// reverse cumulative sum at cell centers.
std::pair<Vec, GridFunction> boundary_objective_gradient(const BoundaryProblemSpec& spec,
                                                         const Grid& grid, const Vec& y,
                                                         const GridFunction& v);

/// Constraint gradients per the derivative-space formulas:
/// grad_y = (grad_ua + grad_ub) f_j at (y, u(b)), grad_v = grad_ub f_j
/// (constant in x). Equalities first, then inequalities.
std::vector<std::pair<Vec, GridFunction>> boundary_constraint_gradients(
    const BoundaryProblemSpec& spec, const Grid& grid, const Vec& y, const GridFunction& v);

struct LicqReport {
  Eigen::MatrixXd gram;          // Gram matrix of equality + active inequality gradients
  double min_eigenvalue = 0.0;
  bool pass = false;
  std::vector<int> active;       // indices of active inequalities
};

/// Linear-independence check of constraint gradients at (y, v); the active
/// set is {i : |g_i| <= active_tol}.
LicqReport check_boundary_licq(const BoundaryProblemSpec& spec, const Grid& grid, const Vec& y,
                               const GridFunction& v, double active_tol = 1e-8);

/// Wire the spec into the generic oracle bundle on X = R^d x L2.
ConstrainedProblem assemble_boundary_problem(const BoundaryProblemSpec& spec, const Grid& grid);

/// The augmented Lagrangian written out in terms of u = A(y, v) directly
/// (independent evaluation path used to cross-check the generic core).
double boundary_explicit_auglag(const BoundaryProblemSpec& spec, const Grid& grid, const Vec& x,
                                const DualState& dual);

// Helpers shared with tests: split/merge of the flat point.
Vec boundary_pack(const BoundaryLayout& lay, std::span<const double> y, const GridFunction& v);
GridFunction boundary_v(const BoundaryLayout& lay, const Grid& grid, const Vec& x);

}  // namespace exalm
