#pragma once

#include "exalm/integrand.hpp"
#include "exalm/problem.hpp"

namespace exalm {

// Variational problems with pointwise affine PDE constraints
// F(u, grad u, x) = A(x) u + sum_i B_i(x) D_i u + D(x) = 0 a.e., enforced at
// cell centers with grid-valued equality multipliers.

struct NonholonomicSpec {
  Grid grid;
  int d = 1;     // state components
  int rows = 1;  // constraint rows (ell)
  IntegrandND f;
  GridFunction A;               // cell-centered, rows*d components (row-major rows x d)
  std::vector<GridFunction> B;  // one per axis, rows*d components
  GridFunction D;               // cell-centered, rows components
  GridFunction ubar;            // node-based datum; empty means zero

  void validate() const;
  const GridFunction* ubar_ptr() const { return ubar.values.empty() ? nullptr : &ubar; }
};

/// Pointwise constraint field A u + sum_i B_i xi_i + D at every cell
/// (the discrete equality map).
GridFunction eval_constraint_field(const NonholonomicSpec& spec, const GridFunction& v);

/// Alternating-sign tail-sum matrix field of the constraint coefficients:
/// reverse multi-axis cumulative sums applied row-wise to A ((-1)^n) and to
/// the B_i ((-1)^(n-1), skipping the own axis). Independent of v for affine
/// constraints; used for the nondegeneracy check P_F != 0 and as a
/// diagnostic field.
GridFunction eval_PF(const NonholonomicSpec& spec, const GridFunction& v);

struct NonholonomicAssembly {
  ConstrainedProblem problem;
  double pf_norm = 0.0;        // L2 norm of the P_F field
  bool exactness_ok = false;   // nondegeneracy precondition ||P_F|| > tol
};

NonholonomicAssembly assemble_nonholonomic_problem(const NonholonomicSpec& spec);

/// Augmented Lagrangian written out with the constraint-map operators spelled
/// as tail sums (independent path for cross-checking the generic core).
double nonholo_explicit_auglag(const NonholonomicSpec& spec, const GridFunction& v,
                               const GridFunction& lambda, double c);

GridFunction nonholo_unpack_v(const NonholonomicSpec& spec, const Vec& x);
GridFunction nonholo_unpack_lambda(const NonholonomicSpec& spec, const Vec& lam);

}  // namespace exalm
