#include "exalm/nonholonomic.hpp"

#include <cmath>

namespace exalm {

void NonholonomicSpec::validate() const {
  grid.validate();
  if (d < 1 || rows < 1) throw std::invalid_argument("nonholonomic spec: d, rows >= 1 required");
  if (!f.value || !f.gradient)
    throw std::invalid_argument("nonholonomic spec: integrand callbacks missing");
  auto check_field = [&](const GridFunction& g, int comps, const char* name) {
    if (g.placement != Placement::Cell || g.components != comps || !g.grid.same_as(grid))
      throw std::invalid_argument(std::string("nonholonomic spec: bad coefficient field ") + name);
    for (double val : g.values)
      if (!std::isfinite(val))
        throw std::invalid_argument(std::string("nonholonomic spec: non-finite entries in ") + name);
  };
  check_field(A, rows * d, "A");
  if (static_cast<int>(B.size()) != grid.dim())
    throw std::invalid_argument("nonholonomic spec: one B field per axis required");
  for (const auto& b : B) check_field(b, rows * d, "B");
  check_field(D, rows, "D");
  if (!ubar.values.empty()) {
    if (ubar.placement != Placement::Node || ubar.components != d || !ubar.grid.same_as(grid))
      throw std::invalid_argument("nonholonomic spec: ubar must be node-based on the same grid");
  }
}

namespace {

// y += scale * M x per cell, with M a (rows x d) field and x a d field.
void matvec_field(const GridFunction& M, const GridFunction& x, int rows, int d, double scale,
                  GridFunction& y) {
  const std::size_t nr = static_cast<std::size_t>(rows), nd = static_cast<std::size_t>(d);
  for (std::size_t cell = 0; cell < x.grid.cell_count(); ++cell)
    for (std::size_t r = 0; r < nr; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < nd; ++c)
        acc += M.values[cell * nr * nd + r * nd + c] * x.values[cell * nd + c];
      y.values[cell * nr + r] += scale * acc;
    }
}

// y += scale * M^T l per cell, with l a rows field; result d components.
void matvec_adjoint_field(const GridFunction& M, const GridFunction& l, int rows, int d,
                          double scale, GridFunction& y) {
  const std::size_t nr = static_cast<std::size_t>(rows), nd = static_cast<std::size_t>(d);
  for (std::size_t cell = 0; cell < l.grid.cell_count(); ++cell)
    for (std::size_t c = 0; c < nd; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < nr; ++r)
        acc += M.values[cell * nr * nd + r * nd + c] * l.values[cell * nr + r];
      y.values[cell * nd + c] += scale * acc;
    }
}

// DF[h]: A * centers(A h) + sum_i B_i * xi_i(h); independent of v (affine map).
GridFunction constraint_jvp(const NonholonomicSpec& spec, const GridFunction& h) {
  FieldSamples hs = sample_fields(nullptr, h);
  GridFunction out(spec.grid, Placement::Cell, spec.rows);
  matvec_field(spec.A, hs.u_centers, spec.rows, spec.d, 1.0, out);
  for (int a = 0; a < spec.grid.dim(); ++a)
    matvec_field(spec.B[static_cast<std::size_t>(a)], hs.xi[static_cast<std::size_t>(a)], spec.rows,
                 spec.d, 1.0, out);
  return out;
}

// DF*[l]: proj_X [ tails(A^T l) + sum_i tails-skip-i(B_i^T l) ].
GridFunction constraint_adjoint(const NonholonomicSpec& spec, const GridFunction& lambda) {
  GridFunction atl(spec.grid, Placement::Cell, spec.d);
  matvec_adjoint_field(spec.A, lambda, spec.rows, spec.d, 1.0, atl);
  GridFunction out = tail_integral(atl);
  for (int a = 0; a < spec.grid.dim(); ++a) {
    GridFunction btl(spec.grid, Placement::Cell, spec.d);
    matvec_adjoint_field(spec.B[static_cast<std::size_t>(a)], lambda, spec.rows, spec.d, 1.0, btl);
    GridFunction t = tail_integral_skip(btl, a);
    add_to(out.values, t.values);
  }
  return project_zero_mean(std::move(out));
}

constexpr double kDegenerateTol = 1e-12;

}  // namespace

GridFunction eval_constraint_field(const NonholonomicSpec& spec, const GridFunction& v) {
  spec.validate();
  FieldSamples s = sample_fields(spec.ubar_ptr(), v);
  GridFunction out = spec.D;
  matvec_field(spec.A, s.u_centers, spec.rows, spec.d, 1.0, out);
  for (int a = 0; a < spec.grid.dim(); ++a)
    matvec_field(spec.B[static_cast<std::size_t>(a)], s.xi[static_cast<std::size_t>(a)], spec.rows,
                 spec.d, 1.0, out);
  return out;
}

GridFunction eval_PF(const NonholonomicSpec& spec, const GridFunction&) {
  spec.validate();
  const int n = spec.grid.dim();
  const double sign_a = (n % 2 == 0) ? 1.0 : -1.0;
  GridFunction out = tail_integral(spec.A);
  for (double& val : out.values) val *= sign_a;
  for (int a = 0; a < n; ++a) {
    GridFunction t = tail_integral_skip(spec.B[static_cast<std::size_t>(a)], a);
    axpy(-sign_a, t.values, out.values);  // (-1)^(n-1)
  }
  return out;
}

NonholonomicAssembly assemble_nonholonomic_problem(const NonholonomicSpec& spec) {
  spec.validate();
  NonholonomicAssembly out;

  GridFunction zero_v(spec.grid, Placement::Cell, spec.d);
  GridFunction pf = eval_PF(spec, zero_v);
  out.pf_norm = l2_norm(pf);
  out.exactness_ok = out.pf_norm > kDegenerateTol;

  ConstrainedProblem& p = out.problem;
  const std::size_t xdim = spec.grid.cell_count() * static_cast<std::size_t>(spec.d);
  const std::size_t ldim = spec.grid.cell_count() * static_cast<std::size_t>(spec.rows);
  p.x_space = WeightedSpace::scaled(xdim, spec.grid.cell_volume());
  p.eq_space = WeightedSpace::scaled(ldim, spec.grid.cell_volume());
  p.eq_multiplier_on_grid = true;
  p.ineq_count = 0;

  const NonholonomicSpec* sp = &spec;

  p.f = [sp](const Vec& x) {
    GridFunction v = nonholo_unpack_v(*sp, x);
    FieldSamples s = sample_fields(sp->ubar_ptr(), v);
    return integrand_integral(sp->f, sp->grid, s);
  };
  p.grad_f = [sp](const Vec& x) {
    GridFunction v = nonholo_unpack_v(*sp, x);
    FieldSamples s = sample_fields(sp->ubar_ptr(), v);
    return project_zero_mean(integrand_P(sp->f, sp->grid, s)).values;
  };
  p.eq = [sp](const Vec& x) {
    return eval_constraint_field(*sp, nonholo_unpack_v(*sp, x)).values;
  };
  p.eq_jvp = [sp](const Vec& x, const Vec& w) {
    (void)x;  // affine map
    return constraint_jvp(*sp, nonholo_unpack_v(*sp, w)).values;
  };
  p.eq_adj = [sp](const Vec& x, const Vec& lam) {
    (void)x;
    return constraint_adjoint(*sp, nonholo_unpack_lambda(*sp, lam)).values;
  };
  p.project = [sp](Vec x) {
    return project_zero_mean(nonholo_unpack_v(*sp, std::move(x))).values;
  };

  if (spec.f.hessian_action) {
    p.lagr_hvp = [sp](const Vec& x, const Vec&, const Vec&, const Vec& w) {
      // constraint part is affine, so only the objective curves
      GridFunction v = nonholo_unpack_v(*sp, x);
      GridFunction wv = nonholo_unpack_v(*sp, w);
      FieldSamples s = sample_fields(sp->ubar_ptr(), v);
      return project_zero_mean(integrand_P_directional(sp->f, sp->grid, s, wv)).values;
    };
    p.eq_adj_dir = [xdim](const Vec&, const Vec&, const Vec&) { return Vec(xdim, 0.0); };
  }

  return out;
}

double nonholo_explicit_auglag(const NonholonomicSpec& spec, const GridFunction& v,
                               const GridFunction& lambda, double c) {
  spec.validate();
  if (c <= 0.0) throw std::invalid_argument("nonholo_explicit_auglag: c must be positive");
  FieldSamples s = sample_fields(spec.ubar_ptr(), v);
  const double I = integrand_integral(spec.f, spec.grid, s);
  GridFunction F = eval_constraint_field(spec, v);
  const double lamF = inner_product(lambda, F);
  const double F2 = inner_product(F, F);
  const double lam2 = inner_product(lambda, lambda);

  // grad_v L = proj P(v) + DF*[lambda]; eta = 1/2 || DF[grad_v L] ||^2
  GridFunction gradL = project_zero_mean(integrand_P(spec.f, spec.grid, s));
  GridFunction adj = constraint_adjoint(spec, lambda);
  add_to(gradL.values, adj.values);
  GridFunction dfw = constraint_jvp(spec, gradL);
  const double eta = 0.5 * inner_product(dfw, dfw);

  return I + lamF + 0.5 * c * (1.0 + lam2) * F2 + eta;
}

GridFunction nonholo_unpack_v(const NonholonomicSpec& spec, const Vec& x) {
  GridFunction v(spec.grid, Placement::Cell, spec.d);
  if (x.size() != v.values.size()) throw std::invalid_argument("nonholonomic: point size mismatch");
  v.values = x;
  return v;
}

GridFunction nonholo_unpack_lambda(const NonholonomicSpec& spec, const Vec& lam) {
  GridFunction l(spec.grid, Placement::Cell, spec.rows);
  if (lam.size() != l.values.size())
    throw std::invalid_argument("nonholonomic: multiplier size mismatch");
  l.values = lam;
  return l;
}

}  // namespace exalm
