#include "exalm/isoperimetric.hpp"

#include <cmath>

namespace exalm {

// --- shared integrand machinery -------------------------------------------

FieldSamples sample_fields(const GridFunction* ubar, const GridFunction& v) {
  if (v.placement != Placement::Cell)
    throw std::invalid_argument("sample_fields: v must be cell-centered");
  FieldSamples s;
  s.u_nodes = cumulative_integral_box(v);
  if (ubar) {
    require_conforming(s.u_nodes, *ubar, "sample_fields(ubar)");
    add_to(s.u_nodes.values, ubar->values);
  }
  s.u_centers = node_to_centers(s.u_nodes);
  s.xi.reserve(static_cast<std::size_t>(v.grid.dim()));
  for (int a = 0; a < v.grid.dim(); ++a) s.xi.push_back(node_axis_derivative(s.u_nodes, a));
  return s;
}

namespace {

struct CellEval {
  GridFunction du;                 // grad_u f at cells
  std::vector<GridFunction> dxi;   // df/dxi_i at cells, per axis
};

CellEval eval_gradients(const IntegrandND& f, const Grid& grid, const FieldSamples& s) {
  const int n = grid.dim();
  const int d = s.u_centers.components;
  const std::size_t dd = static_cast<std::size_t>(d);
  CellEval out{GridFunction(grid, Placement::Cell, d), {}};
  out.dxi.assign(static_cast<std::size_t>(n), GridFunction(grid, Placement::Cell, d));
  std::vector<double> xi(static_cast<std::size_t>(n) * dd), dxi(static_cast<std::size_t>(n) * dd);
  const GridFunction& uc = s.u_centers;
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    for (int a = 0; a < n; ++a)
      for (std::size_t c = 0; c < dd; ++c)
        xi[static_cast<std::size_t>(a) * dd + c] = s.xi[static_cast<std::size_t>(a)].values[cell * dd + c];
    const std::vector<double> x = uc.site_coords(cell);
    f.gradient({&uc.values[cell * dd], dd}, {xi.data(), xi.size()}, {x.data(), x.size()},
               {&out.du.values[cell * dd], dd}, {dxi.data(), dxi.size()});
    for (int a = 0; a < n; ++a)
      for (std::size_t c = 0; c < dd; ++c)
        out.dxi[static_cast<std::size_t>(a)].values[cell * dd + c] = dxi[static_cast<std::size_t>(a) * dd + c];
  }
  return out;
}

GridFunction assemble_P(const Grid& grid, const CellEval& e) {
  GridFunction P = tail_integral(e.du);
  for (int a = 0; a < grid.dim(); ++a) {
    GridFunction t = tail_integral_skip(e.dxi[static_cast<std::size_t>(a)], a);
    add_to(P.values, t.values);
  }
  return P;
}

constexpr double kMembershipTol = 1e-6;

}  // namespace

double integrand_integral(const IntegrandND& f, const Grid& grid, const FieldSamples& s) {
  const int n = grid.dim();
  const std::size_t dd = static_cast<std::size_t>(s.u_centers.components);
  std::vector<double> xi(static_cast<std::size_t>(n) * dd);
  double acc = 0.0;
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    for (int a = 0; a < n; ++a)
      for (std::size_t c = 0; c < dd; ++c)
        xi[static_cast<std::size_t>(a) * dd + c] = s.xi[static_cast<std::size_t>(a)].values[cell * dd + c];
    const std::vector<double> x = s.u_centers.site_coords(cell);
    acc += f.value({&s.u_centers.values[cell * dd], dd}, {xi.data(), xi.size()}, {x.data(), x.size()});
  }
  return acc * grid.cell_volume();
}

GridFunction integrand_P(const IntegrandND& f, const Grid& grid, const FieldSamples& s) {
  return assemble_P(grid, eval_gradients(f, grid, s));
}

GridFunction integrand_P_directional(const IntegrandND& f, const Grid& grid, const FieldSamples& s,
                                     const GridFunction& w) {
  if (!f.hessian_action)
    throw std::invalid_argument("integrand_P_directional: integrand has no hessian action");
  FieldSamples ws = sample_fields(nullptr, w);  // perturbation fields (no offset)
  const int n = grid.dim();
  const std::size_t dd = static_cast<std::size_t>(s.u_centers.components);
  CellEval out{GridFunction(grid, Placement::Cell, s.u_centers.components), {}};
  out.dxi.assign(static_cast<std::size_t>(n), GridFunction(grid, Placement::Cell, s.u_centers.components));
  std::vector<double> xi(static_cast<std::size_t>(n) * dd), zxi(static_cast<std::size_t>(n) * dd),
      oxi(static_cast<std::size_t>(n) * dd);
  for (std::size_t cell = 0; cell < grid.cell_count(); ++cell) {
    for (int a = 0; a < n; ++a)
      for (std::size_t c = 0; c < dd; ++c) {
        xi[static_cast<std::size_t>(a) * dd + c] = s.xi[static_cast<std::size_t>(a)].values[cell * dd + c];
        zxi[static_cast<std::size_t>(a) * dd + c] = ws.xi[static_cast<std::size_t>(a)].values[cell * dd + c];
      }
    const std::vector<double> x = s.u_centers.site_coords(cell);
    f.hessian_action({&s.u_centers.values[cell * dd], dd}, {xi.data(), xi.size()},
                     {x.data(), x.size()}, {&ws.u_centers.values[cell * dd], dd},
                     {zxi.data(), zxi.size()}, {&out.du.values[cell * dd], dd},
                     {oxi.data(), oxi.size()});
    for (int a = 0; a < n; ++a)
      for (std::size_t c = 0; c < dd; ++c)
        out.dxi[static_cast<std::size_t>(a)].values[cell * dd + c] = oxi[static_cast<std::size_t>(a) * dd + c];
  }
  return assemble_P(grid, out);
}

// --- isoperimetric family ---------------------------------------------------

void IsoperimetricSpec::validate() const {
  grid.validate();
  if (d < 1) throw std::invalid_argument("isoperimetric spec: d >= 1 required");
  if (!f0.value || !f0.gradient || !f1.value || !f1.gradient)
    throw std::invalid_argument("isoperimetric spec: integrand callbacks missing");
  if (!ubar.values.empty()) {
    if (ubar.placement != Placement::Node || ubar.components != d || !ubar.grid.same_as(grid))
      throw std::invalid_argument("isoperimetric spec: ubar must be node-based on the same grid");
  }
}

double iso_integral(const IsoperimetricSpec& spec, int which, const GridFunction& v) {
  FieldSamples s = sample_fields(spec.ubar_ptr(), v);
  return integrand_integral(which == 0 ? spec.f0 : spec.f1, spec.grid, s);
}

GridFunction eval_P(const IsoperimetricSpec& spec, int which, const GridFunction& v) {
  spec.validate();
  double linf = 0.0;
  for (double val : v.values) linf = std::max(linf, std::abs(val));
  for (double r : zero_mean_residuals(v))
    if (r > kMembershipTol * (1.0 + linf))
      throw std::invalid_argument("eval_P: v violates the zero-axis-mean membership");
  FieldSamples s = sample_fields(spec.ubar_ptr(), v);
  return integrand_P(which == 0 ? spec.f0 : spec.f1, spec.grid, s);
}

GridFunction iso_objective_gradient(const IsoperimetricSpec& spec, const GridFunction& v) {
  return project_zero_mean(eval_P(spec, 0, v));
}

GridFunction iso_unpack(const IsoperimetricSpec& spec, const Vec& x) {
  GridFunction v(spec.grid, Placement::Cell, spec.d);
  if (x.size() != v.values.size()) throw std::invalid_argument("iso_unpack: size mismatch");
  v.values = x;
  return v;
}

Vec iso_pack(const GridFunction& v) { return v.values; }

ConstrainedProblem assemble_isoperimetric_problem(const IsoperimetricSpec& spec) {
  spec.validate();
  ConstrainedProblem p;
  const std::size_t dim = spec.grid.cell_count() * static_cast<std::size_t>(spec.d);
  p.x_space = WeightedSpace::scaled(dim, spec.grid.cell_volume());
  p.eq_space = WeightedSpace::euclidean(1);
  p.ineq_count = 0;

  const IsoperimetricSpec* sp = &spec;

  p.f = [sp](const Vec& x) { return iso_integral(*sp, 0, iso_unpack(*sp, x)); };
  p.grad_f = [sp](const Vec& x) {
    GridFunction v = iso_unpack(*sp, x);
    FieldSamples s = sample_fields(sp->ubar_ptr(), v);
    return project_zero_mean(integrand_P(sp->f0, sp->grid, s)).values;
  };
  p.eq = [sp](const Vec& x) {
    return Vec{iso_integral(*sp, 1, iso_unpack(*sp, x)) - sp->zeta};
  };
  p.eq_jvp = [sp](const Vec& x, const Vec& w) {
    GridFunction v = iso_unpack(*sp, x);
    FieldSamples s = sample_fields(sp->ubar_ptr(), v);
    GridFunction p1 = project_zero_mean(integrand_P(sp->f1, sp->grid, s));
    GridFunction wv = iso_unpack(*sp, w);
    return Vec{inner_product(p1, wv)};
  };
  p.eq_adj = [sp](const Vec& x, const Vec& lambda) {
    GridFunction v = iso_unpack(*sp, x);
    FieldSamples s = sample_fields(sp->ubar_ptr(), v);
    GridFunction p1 = project_zero_mean(integrand_P(sp->f1, sp->grid, s));
    return scaled_copy(lambda[0], std::move(p1.values));
  };
  p.project = [sp](Vec x) {
    return project_zero_mean(iso_unpack(*sp, std::move(x))).values;
  };

  if (spec.f0.hessian_action && spec.f1.hessian_action) {
    p.lagr_hvp = [sp](const Vec& x, const Vec& lambda, const Vec&, const Vec& w) {
      GridFunction v = iso_unpack(*sp, x);
      GridFunction wv = iso_unpack(*sp, w);
      FieldSamples s = sample_fields(sp->ubar_ptr(), v);
      GridFunction out = integrand_P_directional(sp->f0, sp->grid, s, wv);
      if (lambda[0] != 0.0) {
        GridFunction t = integrand_P_directional(sp->f1, sp->grid, s, wv);
        axpy(lambda[0], t.values, out.values);
      }
      return project_zero_mean(std::move(out)).values;
    };
    p.eq_adj_dir = [sp](const Vec& x, const Vec& psi, const Vec& w) {
      GridFunction v = iso_unpack(*sp, x);
      GridFunction wv = iso_unpack(*sp, w);
      FieldSamples s = sample_fields(sp->ubar_ptr(), v);
      GridFunction t = integrand_P_directional(sp->f1, sp->grid, s, wv);
      return scaled_copy(psi[0], project_zero_mean(std::move(t)).values);
    };
  }
  return p;
}

double iso_explicit_auglag(const IsoperimetricSpec& spec, const GridFunction& v, double lambda,
                           double c) {
  spec.validate();
  if (c <= 0.0) throw std::invalid_argument("iso_explicit_auglag: c must be positive");
  FieldSamples s = sample_fields(spec.ubar_ptr(), v);
  const double I0 = integrand_integral(spec.f0, spec.grid, s);
  const double F = integrand_integral(spec.f1, spec.grid, s) - spec.zeta;
  GridFunction p0 = project_zero_mean(integrand_P(spec.f0, spec.grid, s));
  GridFunction p1 = project_zero_mean(integrand_P(spec.f1, spec.grid, s));
  GridFunction mix = p0;
  axpy(lambda, p1.values, mix.values);
  const double bracket = inner_product(p1, mix);
  return I0 + lambda * F + 0.5 * c * (1.0 + lambda * lambda) * F * F + 0.5 * bracket * bracket;
}

}  // namespace exalm
