#pragma once

#include <vector>

#include "exalm/grid.hpp"

namespace exalm {

// Discrete calculus on uniform grids. The derivative-space change of
// variables u = A(y, v) is realized exactly: v lives at cell centers, u at
// nodes, and the iterated forward difference of the output recovers v to
// machine precision. All operators are pure.

/// u(0) = y, u_{k+1} = u_k + h v_k on an interval grid. v cell-centered,
/// result node-based. Throws if y and v disagree on component count.
GridFunction cumulative_integral_1d(const std::vector<double>& y, const GridFunction& v);

/// Multidimensional cumulative integral: node value = prod(h) * sum of cell
/// values strictly below; nodes on the lower boundary carry 0.
GridFunction cumulative_integral_box(const GridFunction& v);

/// Iterated forward difference D^{(1,...,1)} (nodes -> cells); exact inverse
/// of cumulative_integral_box.
GridFunction mixed_forward_difference(const GridFunction& u);

/// Per-axis membership residuals for the zero-axis-mean subspace X:
/// entry i = max over lines parallel to axis i of |h_i * sum v|.
std::vector<double> zero_mean_residuals(const GridFunction& v);

/// Orthogonal projection onto X, as the inclusion-exclusion of axis
/// averages (equivalently, successive per-axis mean subtraction).
GridFunction project_zero_mean(GridFunction v);

/// Rectangle-rule L2 pairing: sum over sites of prod(h) * <u, w>.
double inner_product(const GridFunction& u, const GridFunction& w);

double l2_norm(const GridFunction& u);

// --- helpers for variational gradients (midpoint-consistent calculus) ---

/// Node values averaged to cell centers along every axis.
GridFunction node_to_centers(const GridFunction& u);

/// Partial derivative at cell centers: forward difference along `axis`,
/// adjacent averages along the others.
GridFunction node_axis_derivative(const GridFunction& u, int axis);

/// Midpoint tail sums along every axis: the discrete adjoint of
/// v -> centers(A v); realizes int_x^b ... int_x^b at cell centers.
GridFunction tail_integral(const GridFunction& f);

/// Same, skipping `skip_axis` (adjoint of the axis derivative map).
GridFunction tail_integral_skip(const GridFunction& f, int skip_axis);

}  // namespace exalm
