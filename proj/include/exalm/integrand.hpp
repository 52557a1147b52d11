#pragma once

#include <functional>
#include <span>
#include <vector>

#include "exalm/function_spaces.hpp"
#include "exalm/grid.hpp"

namespace exalm {

/// Integrand f(u, xi, x) on a box: u in R^d, xi the d x n gradient stored
/// axis-major (xi[axis*d + comp]), x in R^n. The optional Hessian action maps
/// a tangent (zu, zxi) to (out_u, out_xi) at one sample point.
struct IntegrandND {
  std::function<double(std::span<const double> u, std::span<const double> xi,
                       std::span<const double> x)> value;
  std::function<void(std::span<const double> u, std::span<const double> xi,
                     std::span<const double> x, std::span<double> du, std::span<double> dxi)>
      gradient;
  std::function<void(std::span<const double> u, std::span<const double> xi,
                     std::span<const double> x, std::span<const double> zu,
                     std::span<const double> zxi, std::span<double> out_u,
                     std::span<double> out_xi)> hessian_action;
};

/// u = ubar + A v sampled where the calculus needs it: nodes, centers, and
/// the per-axis derivatives at centers.
struct FieldSamples {
  GridFunction u_nodes;
  GridFunction u_centers;
  std::vector<GridFunction> xi;  // one per axis
};

/// ubar may be empty (treated as zero). v is cell-centered with d components.
FieldSamples sample_fields(const GridFunction* ubar, const GridFunction& v);

double integrand_integral(const IntegrandND& f, const Grid& grid, const FieldSamples& s);

/// The unprojected gradient kernel P(v): tail sums of grad_u f over all axes
/// plus, per axis i, tail sums of df/dxi_i over the other axes.
GridFunction integrand_P(const IntegrandND& f, const Grid& grid, const FieldSamples& s);

/// Directional derivative of v -> P(v) along w (unprojected); needs the
/// integrand's hessian_action.
GridFunction integrand_P_directional(const IntegrandND& f, const Grid& grid, const FieldSamples& s,
                                     const GridFunction& w);

}  // namespace exalm
