#pragma once

#include "exalm/integrand.hpp"
#include "exalm/problem.hpp"

namespace exalm {

// Multidimensional variational problem with one scalar isoperimetric
// equality constraint, posed over the zero-axis-mean density space X with
// u = ubar + A v.

struct IsoperimetricSpec {
  Grid grid;
  int d = 1;
  IntegrandND f0;  // objective integrand
  IntegrandND f1;  // constraint integrand
  double zeta = 0.0;
  GridFunction ubar;  // node-based boundary datum; empty means zero

  void validate() const;
  const GridFunction* ubar_ptr() const { return ubar.values.empty() ? nullptr : &ubar; }
};

/// I_i(ubar + A v) by the midpoint rule.
double iso_integral(const IsoperimetricSpec& spec, int which, const GridFunction& v);

/// The gradient kernel P_i(v) at cell centers (reverse multi-axis cumulative
/// sums). Rejects v that leaves the zero-mean space X beyond tolerance.
GridFunction eval_P(const IsoperimetricSpec& spec, int which, const GridFunction& v);

/// grad of I_0(ubar + A v) in X: proj_X P_0(v).
GridFunction iso_objective_gradient(const IsoperimetricSpec& spec, const GridFunction& v);

/// Oracle bundle with the scalar equality F(v) = I_1(ubar + A v) - zeta.
ConstrainedProblem assemble_isoperimetric_problem(const IsoperimetricSpec& spec);

/// The augmented Lagrangian written out directly in terms of P_0, P_1
/// (independent path used to cross-check the generic core).
double iso_explicit_auglag(const IsoperimetricSpec& spec, const GridFunction& v, double lambda,
                           double c);

// Flat-vector glue for the generic solver.
GridFunction iso_unpack(const IsoperimetricSpec& spec, const Vec& x);
Vec iso_pack(const GridFunction& v);

}  // namespace exalm
