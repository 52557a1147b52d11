#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace exalm {

/// Uniform tensor-product grid on a box prod_i (lo_i, hi_i).
struct Grid {
  struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int cells = 2;
  };

  std::vector<Axis> axes;

  static Grid interval(double lo, double hi, int cells) {
    Grid g;
    g.axes.push_back({lo, hi, cells});
    g.validate();
    return g;
  }

  static Grid box(std::vector<Axis> ax) {
    Grid g;
    g.axes = std::move(ax);
    g.validate();
    return g;
  }

  void validate() const {
    if (axes.empty()) throw std::invalid_argument("grid: needs at least one axis");
    std::size_t cells = 1;
    for (const auto& a : axes) {
      if (!(a.lo < a.hi)) throw std::invalid_argument("grid: axis bounds must satisfy lo < hi");
      if (a.cells < 1) throw std::invalid_argument("grid: axis needs at least one cell");
      cells *= static_cast<std::size_t>(a.cells);
    }
    if (cells < 2) throw std::invalid_argument("grid: total cell count must be >= 2");
  }

  int dim() const { return static_cast<int>(axes.size()); }

  double width(int axis) const {
    const Axis& a = axes[static_cast<std::size_t>(axis)];
    return (a.hi - a.lo) / a.cells;
  }

  /// Volume of one cell, prod_i h_i.
  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= width(i);
    return v;
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.cells);
    return n;
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.cells) + 1;
    return n;
  }

  double cell_center(int axis, int index) const {
    const Axis& a = axes[static_cast<std::size_t>(axis)];
    return a.lo + (index + 0.5) * width(axis);
  }

  double node_coord(int axis, int index) const {
    const Axis& a = axes[static_cast<std::size_t>(axis)];
    return a.lo + index * width(axis);
  }

  bool same_as(const Grid& other, double tol = 0.0) const {
    if (axes.size() != other.axes.size()) return false;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].cells != other.axes[i].cells) return false;
      if (std::abs(axes[i].lo - other.axes[i].lo) > tol) return false;
      if (std::abs(axes[i].hi - other.axes[i].hi) > tol) return false;
    }
    return true;
  }
};

enum class Placement { Cell, Node };

/// Values of a vector-valued function sampled on a grid, either at cell
/// centers or at nodes. Layout is row-major over the axes (last axis
/// fastest) with the component index innermost.
struct GridFunction {
  Grid grid;
  Placement placement = Placement::Cell;
  int components = 1;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(Grid g, Placement p, int comp)
      : grid(std::move(g)), placement(p), components(comp) {
    if (comp < 1) throw std::invalid_argument("grid function: components must be >= 1");
    values.assign(site_count() * static_cast<std::size_t>(comp), 0.0);
  }

  std::size_t site_count() const {
    return placement == Placement::Cell ? grid.cell_count() : grid.node_count();
  }

  /// Extent along each axis for this placement.
  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s(static_cast<std::size_t>(grid.dim()));
    for (int i = 0; i < grid.dim(); ++i) {
      s[static_cast<std::size_t>(i)] = static_cast<std::size_t>(grid.axes[static_cast<std::size_t>(i)].cells) +
                                       (placement == Placement::Node ? 1 : 0);
    }
    return s;
  }

  double& at(std::size_t site, int comp) { return values[site * static_cast<std::size_t>(components) + static_cast<std::size_t>(comp)]; }
  double at(std::size_t site, int comp) const { return values[site * static_cast<std::size_t>(components) + static_cast<std::size_t>(comp)]; }

  /// Coordinates of a site given its flat index.
  std::vector<double> site_coords(std::size_t site) const {
    std::vector<std::size_t> s = shape();
    std::vector<double> x(s.size());
    for (int a = grid.dim() - 1; a >= 0; --a) {
      std::size_t extent = s[static_cast<std::size_t>(a)];
      std::size_t idx = site % extent;
      site /= extent;
      x[static_cast<std::size_t>(a)] = placement == Placement::Cell
                                           ? grid.cell_center(a, static_cast<int>(idx))
                                           : grid.node_coord(a, static_cast<int>(idx));
    }
    return x;
  }

  bool conforms(const GridFunction& other) const {
    return placement == other.placement && components == other.components &&
           grid.same_as(other.grid);
  }
};

inline void require_conforming(const GridFunction& a, const GridFunction& b, const char* what) {
  if (!a.conforms(b)) throw std::invalid_argument(std::string(what) + ": grid/placement/component mismatch");
}

}  // namespace exalm
