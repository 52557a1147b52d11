#include "exalm/function_spaces.hpp"

#include <cmath>
#include <numeric>

#include "exalm/kernels.hpp"

namespace exalm {

namespace {

struct AxisSplit {
  std::size_t pre, n, post;
};

// View shape (+ trailing components) as [pre][n][post] around `axis`.
AxisSplit split(const std::vector<std::size_t>& shape, int components, int axis) {
  AxisSplit s{1, shape[static_cast<std::size_t>(axis)], static_cast<std::size_t>(components)};
  for (int a = 0; a < axis; ++a) s.pre *= shape[static_cast<std::size_t>(a)];
  for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < shape.size(); ++a) s.post *= shape[a];
  return s;
}

std::size_t total(const std::vector<std::size_t>& shape, int components) {
  std::size_t t = static_cast<std::size_t>(components);
  for (std::size_t e : shape) t *= e;
  return t;
}

}  // namespace

GridFunction cumulative_integral_1d(const std::vector<double>& y, const GridFunction& v) {
  if (v.grid.dim() != 1) throw std::invalid_argument("cumulative_integral_1d: expects interval grid");
  if (v.placement != Placement::Cell)
    throw std::invalid_argument("cumulative_integral_1d: v must be cell-centered");
  if (static_cast<int>(y.size()) != v.components)
    throw std::invalid_argument("cumulative_integral_1d: y/v component mismatch");

  GridFunction u(v.grid, Placement::Node, v.components);
  const std::size_t n = v.grid.cell_count();
  kern::scan_cells_to_nodes(v.values.data(), 1, n, static_cast<std::size_t>(v.components),
                            v.grid.width(0), u.values.data());
  for (std::size_t k = 0; k <= n; ++k)
    for (int c = 0; c < v.components; ++c) u.at(k, c) += y[static_cast<std::size_t>(c)];
  return u;
}

GridFunction cumulative_integral_box(const GridFunction& v) {
  if (v.placement != Placement::Cell)
    throw std::invalid_argument("cumulative_integral_box: v must be cell-centered");
  std::vector<std::size_t> shape = v.shape();
  std::vector<double> cur = v.values;
  for (int a = 0; a < v.grid.dim(); ++a) {
    AxisSplit s = split(shape, v.components, a);
    shape[static_cast<std::size_t>(a)] += 1;
    std::vector<double> next(total(shape, v.components));
    kern::scan_cells_to_nodes(cur.data(), s.pre, s.n, s.post, v.grid.width(a), next.data());
    cur = std::move(next);
  }
  GridFunction u(v.grid, Placement::Node, v.components);
  u.values = std::move(cur);
  return u;
}

GridFunction mixed_forward_difference(const GridFunction& u) {
  if (u.placement != Placement::Node)
    throw std::invalid_argument("mixed_forward_difference: u must be node-based");
  std::vector<std::size_t> shape = u.shape();
  std::vector<double> cur = u.values;
  for (int a = 0; a < u.grid.dim(); ++a) {
    AxisSplit s = split(shape, u.components, a);
    shape[static_cast<std::size_t>(a)] -= 1;
    std::vector<double> next(total(shape, u.components));
    kern::forward_difference(cur.data(), s.pre, s.n, s.post, u.grid.width(a), next.data());
    cur = std::move(next);
  }
  GridFunction v(u.grid, Placement::Cell, u.components);
  v.values = std::move(cur);
  return v;
}

std::vector<double> zero_mean_residuals(const GridFunction& v) {
  if (v.placement != Placement::Cell)
    throw std::invalid_argument("zero_mean_residuals: v must be cell-centered");
  std::vector<std::size_t> shape = v.shape();
  std::vector<double> res(static_cast<std::size_t>(v.grid.dim()));
  for (int a = 0; a < v.grid.dim(); ++a) {
    AxisSplit s = split(shape, v.components, a);
    res[static_cast<std::size_t>(a)] =
        kern::max_abs_line_integral(v.values.data(), s.pre, s.n, s.post, v.grid.width(a));
  }
  return res;
}

GridFunction project_zero_mean(GridFunction v) {
  if (v.placement != Placement::Cell)
    throw std::invalid_argument("project_zero_mean: v must be cell-centered");
  std::vector<std::size_t> shape = v.shape();
  for (int a = 0; a < v.grid.dim(); ++a) {
    AxisSplit s = split(shape, v.components, a);
    kern::subtract_line_mean(v.values.data(), s.pre, s.n, s.post);
  }
  return v;
}

double inner_product(const GridFunction& u, const GridFunction& w) {
  require_conforming(u, w, "inner_product");
  return u.grid.cell_volume() * kern::dot(u.values.data(), w.values.data(), u.values.size());
}

double l2_norm(const GridFunction& u) { return std::sqrt(inner_product(u, u)); }

GridFunction node_to_centers(const GridFunction& u) {
  if (u.placement != Placement::Node)
    throw std::invalid_argument("node_to_centers: u must be node-based");
  std::vector<std::size_t> shape = u.shape();
  std::vector<double> cur = u.values;
  for (int a = 0; a < u.grid.dim(); ++a) {
    AxisSplit s = split(shape, u.components, a);
    shape[static_cast<std::size_t>(a)] -= 1;
    std::vector<double> next(total(shape, u.components));
    kern::adjacent_average(cur.data(), s.pre, s.n, s.post, next.data());
    cur = std::move(next);
  }
  GridFunction out(u.grid, Placement::Cell, u.components);
  out.values = std::move(cur);
  return out;
}

GridFunction node_axis_derivative(const GridFunction& u, int axis) {
  if (u.placement != Placement::Node)
    throw std::invalid_argument("node_axis_derivative: u must be node-based");
  std::vector<std::size_t> shape = u.shape();
  std::vector<double> cur = u.values;
  for (int a = 0; a < u.grid.dim(); ++a) {
    AxisSplit s = split(shape, u.components, a);
    shape[static_cast<std::size_t>(a)] -= 1;
    std::vector<double> next(total(shape, u.components));
    if (a == axis)
      kern::forward_difference(cur.data(), s.pre, s.n, s.post, u.grid.width(a), next.data());
    else
      kern::adjacent_average(cur.data(), s.pre, s.n, s.post, next.data());
    cur = std::move(next);
  }
  GridFunction out(u.grid, Placement::Cell, u.components);
  out.values = std::move(cur);
  return out;
}

GridFunction tail_integral(const GridFunction& f) {
  return tail_integral_skip(f, -1);
}

GridFunction tail_integral_skip(const GridFunction& f, int skip_axis) {
  if (f.placement != Placement::Cell)
    throw std::invalid_argument("tail_integral: field must be cell-centered");
  GridFunction out = f;
  std::vector<std::size_t> shape = f.shape();
  std::vector<double> tmp(out.values.size());
  for (int a = 0; a < f.grid.dim(); ++a) {
    if (a == skip_axis) continue;
    AxisSplit s = split(shape, f.components, a);
    kern::tail_midpoint(out.values.data(), s.pre, s.n, s.post, f.grid.width(a), tmp.data());
    out.values.swap(tmp);
  }
  return out;
}

}  // namespace exalm
