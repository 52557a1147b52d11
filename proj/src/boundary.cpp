#include "exalm/boundary.hpp"

#include <cmath>

#include "exalm/auglag.hpp"

namespace exalm {

void BoundaryProblemSpec::validate() const {
  if (!(a < b)) throw std::invalid_argument("boundary spec: needs a < b");
  if (d < 1) throw std::invalid_argument("boundary spec: d >= 1 required");
  if (!f.value || !f.gradient) throw std::invalid_argument("boundary spec: integrand callbacks missing");
  if (equalities.empty() && inequalities.empty())
    throw std::invalid_argument("boundary spec: needs at least one constraint");
}

BoundaryLayout boundary_layout(const BoundaryProblemSpec& spec, const Grid& grid) {
  if (grid.dim() != 1) throw std::invalid_argument("boundary problem: expects an interval grid");
  if (std::abs(grid.axes[0].lo - spec.a) > 0 || std::abs(grid.axes[0].hi - spec.b) > 0)
    throw std::invalid_argument("boundary problem: grid does not match the spec interval");
  return {spec.d, grid.cell_count(), grid.width(0)};
}

Vec boundary_pack(const BoundaryLayout& lay, std::span<const double> y, const GridFunction& v) {
  Vec x(lay.dim());
  for (int c = 0; c < lay.d; ++c) x[static_cast<std::size_t>(c)] = y[static_cast<std::size_t>(c)];
  std::copy(v.values.begin(), v.values.end(), x.begin() + lay.d);
  return x;
}

GridFunction boundary_v(const BoundaryLayout& lay, const Grid& grid, const Vec& x) {
  GridFunction v(grid, Placement::Cell, lay.d);
  std::copy(x.begin() + lay.d, x.end(), v.values.begin());
  return v;
}

namespace {

// Cached per-point samples: u at nodes/centers, u(b), and the integrand
// derivative fields at cell centers.
struct Samples {
  GridFunction u_nodes;
  GridFunction u_centers;
  Vec ub;
  GridFunction du;   // grad_u f per cell
  GridFunction dxi;  // grad_xi f per cell
};

Samples sample(const BoundaryProblemSpec& spec, const Grid& grid, const Vec& y_and_v) {
  BoundaryLayout lay = boundary_layout(spec, grid);
  Samples s{GridFunction(), GridFunction(), Vec(static_cast<std::size_t>(lay.d)),
            GridFunction(grid, Placement::Cell, lay.d), GridFunction(grid, Placement::Cell, lay.d)};
  GridFunction v = boundary_v(lay, grid, y_and_v);
  Vec y(y_and_v.begin(), y_and_v.begin() + lay.d);
  s.u_nodes = cumulative_integral_1d(y, v);
  s.u_centers = node_to_centers(s.u_nodes);
  for (int c = 0; c < lay.d; ++c) s.ub[static_cast<std::size_t>(c)] = s.u_nodes.at(lay.cells, c);
  const std::size_t dd = static_cast<std::size_t>(lay.d);
  for (std::size_t k = 0; k < lay.cells; ++k) {
    const double xc = grid.cell_center(0, static_cast<int>(k));
    spec.f.gradient({&s.u_centers.values[k * dd], dd}, {&v.values[k * dd], dd}, xc,
                    {&s.du.values[k * dd], dd}, {&s.dxi.values[k * dd], dd});
  }
  return s;
}

double integral_value(const BoundaryProblemSpec& spec, const Grid& grid, const GridFunction& u_centers,
                      const GridFunction& v) {
  const std::size_t dd = static_cast<std::size_t>(spec.d);
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.cell_count(); ++k)
    acc += spec.f.value({&u_centers.values[k * dd], dd}, {&v.values[k * dd], dd},
                        grid.cell_center(0, static_cast<int>(k)));
  return acc * grid.width(0);
}

// Adjoint of the map (w_y, w_v) -> field at centers: distribute a cell field
// back onto (y, v): y += h * sum(field), v += midpoint tail of field.
void scatter_center_field(const Grid& grid, const GridFunction& field, Vec& out_y, GridFunction& out_v) {
  const double h = grid.width(0);
  const std::size_t dd = static_cast<std::size_t>(field.components);
  for (std::size_t k = 0; k < grid.cell_count(); ++k)
    for (std::size_t c = 0; c < dd; ++c) out_y[c] += h * field.values[k * dd + c];
  GridFunction tail = tail_integral(field);
  add_to(out_v.values, tail.values);
}

}  // namespace

std::pair<Vec, GridFunction> boundary_objective_gradient(const BoundaryProblemSpec& spec,
                                                         const Grid& grid, const Vec& y,
                                                         const GridFunction& v) {
  spec.validate();
  BoundaryLayout lay = boundary_layout(spec, grid);
  Vec x = boundary_pack(lay, y, v);
  Samples s = sample(spec, grid, x);

  Vec grad_y(static_cast<std::size_t>(lay.d), 0.0);
  GridFunction grad_v(grid, Placement::Cell, lay.d);
  scatter_center_field(grid, s.du, grad_y, grad_v);
  add_to(grad_v.values, s.dxi.values);

  if (spec.f0.value) {
    Vec dua(static_cast<std::size_t>(lay.d), 0.0), dub(static_cast<std::size_t>(lay.d), 0.0);
    spec.f0.gradient({y.data(), y.size()}, {s.ub.data(), s.ub.size()}, {dua.data(), dua.size()},
                     {dub.data(), dub.size()});
    for (std::size_t c = 0; c < dua.size(); ++c) grad_y[c] += dua[c] + dub[c];
    for (std::size_t k = 0; k < lay.cells; ++k)
      for (std::size_t c = 0; c < dua.size(); ++c)
        grad_v.values[k * dua.size() + c] += dub[c];
  }
  return {std::move(grad_y), std::move(grad_v)};
}

std::vector<std::pair<Vec, GridFunction>> boundary_constraint_gradients(
    const BoundaryProblemSpec& spec, const Grid& grid, const Vec& y, const GridFunction& v) {
  spec.validate();
  BoundaryLayout lay = boundary_layout(spec, grid);
  Vec x = boundary_pack(lay, y, v);
  Samples s = sample(spec, grid, x);

  std::vector<std::pair<Vec, GridFunction>> out;
  auto one = [&](const BoundaryFunction& fn) {
    const std::size_t dd = static_cast<std::size_t>(lay.d);
    Vec dua(dd, 0.0), dub(dd, 0.0);
    fn.gradient({y.data(), y.size()}, {s.ub.data(), s.ub.size()}, {dua.data(), dd}, {dub.data(), dd});
    Vec gy(dd);
    for (std::size_t c = 0; c < dd; ++c) gy[c] = dua[c] + dub[c];
    GridFunction gv(grid, Placement::Cell, lay.d);
    for (std::size_t k = 0; k < lay.cells; ++k)
      for (std::size_t c = 0; c < dd; ++c) gv.values[k * dd + c] = dub[c];
    out.emplace_back(std::move(gy), std::move(gv));
  };
  for (const auto& fj : spec.equalities) one(fj);
  for (const auto& gi : spec.inequalities) one(gi);
  return out;
}

LicqReport check_boundary_licq(const BoundaryProblemSpec& spec, const Grid& grid, const Vec& y,
                               const GridFunction& v, double active_tol) {
  if (active_tol <= 0.0) throw std::invalid_argument("check_boundary_licq: active_tol must be positive");
  BoundaryLayout lay = boundary_layout(spec, grid);
  Vec x = boundary_pack(lay, y, v);
  Samples s = sample(spec, grid, x);

  LicqReport rep;
  std::vector<std::pair<Vec, Vec>> rows;  // (grad_y, grad_ub) per retained constraint
  auto push = [&](const BoundaryFunction& fn) {
    const std::size_t dd = static_cast<std::size_t>(lay.d);
    Vec dua(dd, 0.0), dub(dd, 0.0);
    fn.gradient({y.data(), y.size()}, {s.ub.data(), s.ub.size()}, {dua.data(), dd}, {dub.data(), dd});
    Vec gy(dd);
    for (std::size_t c = 0; c < dd; ++c) gy[c] = dua[c] + dub[c];
    rows.emplace_back(std::move(gy), std::move(dub));
  };
  for (const auto& fj : spec.equalities) push(fj);
  for (std::size_t i = 0; i < spec.inequalities.size(); ++i) {
    const double gi = spec.inequalities[i].value({y.data(), y.size()}, {s.ub.data(), s.ub.size()});
    if (std::abs(gi) <= active_tol) {
      rep.active.push_back(static_cast<int>(i));
      push(spec.inequalities[i]);
    }
  }

  const std::size_t n = rows.size();
  rep.gram.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double len = spec.b - spec.a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < rows[i].first.size(); ++c) {
        dot += rows[i].first[c] * rows[j].first[c];
        dot += len * rows[i].second[c] * rows[j].second[c];  // constant-in-x gradients
      }
      rep.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dot;
    }
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.gram, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues()(0);
  }
  rep.pass = n == 0 || rep.min_eigenvalue > 1e-10;
  return rep;
}

ConstrainedProblem assemble_boundary_problem(const BoundaryProblemSpec& spec, const Grid& grid) {
  spec.validate();
  const BoundaryLayout lay = boundary_layout(spec, grid);

  ConstrainedProblem p;
  p.x_space.weights.assign(lay.dim(), lay.h);
  for (int c = 0; c < lay.d; ++c) p.x_space.weights[static_cast<std::size_t>(c)] = 1.0;
  p.eq_space = WeightedSpace::euclidean(spec.equalities.size());
  p.ineq_count = static_cast<int>(spec.inequalities.size());

  const BoundaryProblemSpec* sp = &spec;
  const Grid g = grid;

  auto boundary_values = [sp, g, lay](const Vec& x, const std::vector<BoundaryFunction>& fns) {
    Samples s = sample(*sp, g, x);
    Vec y(x.begin(), x.begin() + lay.d);
    Vec out(fns.size());
    for (std::size_t j = 0; j < fns.size(); ++j)
      out[j] = fns[j].value({y.data(), y.size()}, {s.ub.data(), s.ub.size()});
    return out;
  };

  p.f = [sp, g, lay](const Vec& x) {
    Samples s = sample(*sp, g, x);
    GridFunction v = boundary_v(lay, g, x);
    double val = integral_value(*sp, g, s.u_centers, v);
    if (sp->f0.value) {
      Vec y(x.begin(), x.begin() + lay.d);
      val += sp->f0.value({y.data(), y.size()}, {s.ub.data(), s.ub.size()});
    }
    return val;
  };

  p.grad_f = [sp, g, lay](const Vec& x) {
    Vec y(x.begin(), x.begin() + lay.d);
    GridFunction v = boundary_v(lay, g, x);
    auto [gy, gv] = boundary_objective_gradient(*sp, g, y, v);
    return boundary_pack(lay, gy, gv);
  };

  p.eq = [sp, boundary_values](const Vec& x) { return boundary_values(x, sp->equalities); };
  p.ineq = [sp, boundary_values](const Vec& x) { return boundary_values(x, sp->inequalities); };

  // directional derivative of f_j(y, u(b)) along w = (w_y, w_v):
  // <grad_ua, w_y> + <grad_ub, w_y + h*sum(w_v)>.
  auto constraint_jvp = [sp, g, lay](const Vec& x, const Vec& w, const std::vector<BoundaryFunction>& fns) {
    Samples s = sample(*sp, g, x);
    Vec y(x.begin(), x.begin() + lay.d);
    const std::size_t dd = static_cast<std::size_t>(lay.d);
    Vec dub_w(dd, 0.0);  // w_y + h * sum w_v  (the u(b) perturbation)
    for (std::size_t c = 0; c < dd; ++c) dub_w[c] = w[c];
    for (std::size_t k = 0; k < lay.cells; ++k)
      for (std::size_t c = 0; c < dd; ++c) dub_w[c] += lay.h * w[dd + k * dd + c];
    Vec out(fns.size());
    Vec dua(dd), dub(dd);
    for (std::size_t j = 0; j < fns.size(); ++j) {
      fns[j].gradient({y.data(), dd}, {s.ub.data(), dd}, {dua.data(), dd}, {dub.data(), dd});
      double acc = 0.0;
      for (std::size_t c = 0; c < dd; ++c) acc += dua[c] * w[c] + dub[c] * dub_w[c];
      out[j] = acc;
    }
    return out;
  };
  p.eq_jvp = [sp, constraint_jvp](const Vec& x, const Vec& w) {
    return constraint_jvp(x, w, sp->equalities);
  };

  auto constraint_grad_flat = [sp, g, lay](const Vec& x, const BoundaryFunction& fn) {
    Samples s = sample(*sp, g, x);
    Vec y(x.begin(), x.begin() + lay.d);
    const std::size_t dd = static_cast<std::size_t>(lay.d);
    Vec dua(dd), dub(dd);
    fn.gradient({y.data(), dd}, {s.ub.data(), dd}, {dua.data(), dd}, {dub.data(), dd});
    Vec out(lay.dim(), 0.0);
    for (std::size_t c = 0; c < dd; ++c) out[c] = dua[c] + dub[c];
    for (std::size_t k = 0; k < lay.cells; ++k)
      for (std::size_t c = 0; c < dd; ++c) out[dd + k * dd + c] = dub[c];
    return out;
  };

  p.eq_adj = [sp, constraint_grad_flat, lay](const Vec& x, const Vec& lambda) {
    Vec out(lay.dim(), 0.0);
    for (std::size_t j = 0; j < sp->equalities.size(); ++j)
      if (lambda[j] != 0.0) axpy(lambda[j], constraint_grad_flat(x, sp->equalities[j]), out);
    return out;
  };
  p.ineq_grad = [sp, constraint_grad_flat](const Vec& x, int i) {
    return constraint_grad_flat(x, sp->inequalities[static_cast<std::size_t>(i)]);
  };

  // --- second-order actions ---
  const bool integrand_h = static_cast<bool>(spec.f.hessian_action);
  bool boundary_h = !spec.f0.value || static_cast<bool>(spec.f0.hessian_action);
  for (const auto& fn : spec.equalities) boundary_h = boundary_h && static_cast<bool>(fn.hessian_action);
  for (const auto& fn : spec.inequalities) boundary_h = boundary_h && static_cast<bool>(fn.hessian_action);

  if (integrand_h && boundary_h) {
    // Hessian action of a single boundary function through (ua, ub) = (y, y + h*sum v).
    auto boundary_hvp = [lay](const BoundaryFunction& fn, std::span<const double> y,
                              std::span<const double> ub, const Vec& w, Vec& out, double scale) {
      const std::size_t dd = static_cast<std::size_t>(lay.d);
      Vec za(dd), zb(dd);
      for (std::size_t c = 0; c < dd; ++c) {
        za[c] = w[c];
        zb[c] = w[c];
      }
      for (std::size_t k = 0; k < lay.cells; ++k)
        for (std::size_t c = 0; c < dd; ++c) zb[c] += lay.h * w[dd + k * dd + c];
      Vec oa(dd, 0.0), ob(dd, 0.0);
      fn.hessian_action(y, ub, {za.data(), dd}, {zb.data(), dd}, {oa.data(), dd}, {ob.data(), dd});
      for (std::size_t c = 0; c < dd; ++c) out[c] += scale * (oa[c] + ob[c]);
      for (std::size_t k = 0; k < lay.cells; ++k)
        for (std::size_t c = 0; c < dd; ++c) out[dd + k * dd + c] += scale * ob[c];
    };

    p.lagr_hvp = [sp, g, lay, boundary_hvp](const Vec& x, const Vec& lambda, const Vec& mu, const Vec& w) {
      Samples s = sample(*sp, g, x);
      GridFunction v = boundary_v(lay, g, x);
      Vec y(x.begin(), x.begin() + lay.d);
      const std::size_t dd = static_cast<std::size_t>(lay.d);

      // integrand part
      Vec wy(w.begin(), w.begin() + lay.d);
      GridFunction wv = boundary_v(lay, g, w);
      GridFunction wu_centers = node_to_centers(cumulative_integral_1d(wy, wv));
      GridFunction out_u(g, Placement::Cell, lay.d), out_xi(g, Placement::Cell, lay.d);
      for (std::size_t k = 0; k < lay.cells; ++k) {
        sp->f.hessian_action({&s.u_centers.values[k * dd], dd}, {&v.values[k * dd], dd},
                             g.cell_center(0, static_cast<int>(k)),
                             {&wu_centers.values[k * dd], dd}, {&wv.values[k * dd], dd},
                             {&out_u.values[k * dd], dd}, {&out_xi.values[k * dd], dd});
      }
      Vec out(lay.dim(), 0.0);
      Vec out_y(dd, 0.0);
      GridFunction out_v(g, Placement::Cell, lay.d);
      scatter_center_field(g, out_u, out_y, out_v);
      add_to(out_v.values, out_xi.values);
      for (std::size_t c = 0; c < dd; ++c) out[c] = out_y[c];
      std::copy(out_v.values.begin(), out_v.values.end(), out.begin() + lay.d);

      // boundary parts
      std::span<const double> ys{y.data(), dd}, ubs{s.ub.data(), dd};
      if (sp->f0.value) boundary_hvp(sp->f0, ys, ubs, w, out, 1.0);
      for (std::size_t j = 0; j < sp->equalities.size(); ++j)
        if (lambda[j] != 0.0) boundary_hvp(sp->equalities[j], ys, ubs, w, out, lambda[j]);
      for (std::size_t i = 0; i < sp->inequalities.size(); ++i)
        if (mu[i] != 0.0) boundary_hvp(sp->inequalities[i], ys, ubs, w, out, mu[i]);
      return out;
    };

    p.eq_adj_dir = [sp, g, lay, boundary_hvp](const Vec& x, const Vec& psi, const Vec& w) {
      Samples s = sample(*sp, g, x);
      Vec y(x.begin(), x.begin() + lay.d);
      const std::size_t dd = static_cast<std::size_t>(lay.d);
      Vec out(lay.dim(), 0.0);
      for (std::size_t j = 0; j < sp->equalities.size(); ++j)
        if (psi[j] != 0.0)
          boundary_hvp(sp->equalities[j], {y.data(), dd}, {s.ub.data(), dd}, w, out, psi[j]);
      return out;
    };

    p.ineq_hvp = [sp, g, lay, boundary_hvp](const Vec& x, int i, const Vec& w) {
      Samples s = sample(*sp, g, x);
      Vec y(x.begin(), x.begin() + lay.d);
      const std::size_t dd = static_cast<std::size_t>(lay.d);
      Vec out(lay.dim(), 0.0);
      boundary_hvp(sp->inequalities[static_cast<std::size_t>(i)], {y.data(), dd}, {s.ub.data(), dd},
                   w, out, 1.0);
      return out;
    };
  }

  return p;
}

double boundary_explicit_auglag(const BoundaryProblemSpec& spec, const Grid& grid, const Vec& x,
                                const DualState& dual) {
  spec.validate();
  if (dual.c <= 0.0) throw std::invalid_argument("boundary_explicit_auglag: c must be positive");
  const BoundaryLayout lay = boundary_layout(spec, grid);
  Samples s = sample(spec, grid, x);
  Vec y(x.begin(), x.begin() + lay.d);
  GridFunction v = boundary_v(lay, grid, x);
  const std::size_t dd = static_cast<std::size_t>(lay.d);
  std::span<const double> ys{y.data(), dd}, ubs{s.ub.data(), dd};

  double value = integral_value(spec, grid, s.u_centers, v);
  if (spec.f0.value) value += spec.f0.value(ys, ubs);

  const std::size_t ell = spec.equalities.size();
  const std::size_t m = spec.inequalities.size();
  Vec F(ell), G(m);
  for (std::size_t j = 0; j < ell; ++j) F[j] = spec.equalities[j].value(ys, ubs);
  for (std::size_t i = 0; i < m; ++i) G[i] = spec.inequalities[i].value(ys, ubs);

  double lam2 = 0.0, F2 = 0.0;
  for (std::size_t j = 0; j < ell; ++j) {
    value += dual.lambda[j] * F[j];
    lam2 += dual.lambda[j] * dual.lambda[j];
    F2 += F[j] * F[j];
  }
  value += 0.5 * dual.c * (1.0 + lam2) * F2;

  double mu2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) mu2 += dual.mu[i] * dual.mu[i];
  for (std::size_t i = 0; i < m; ++i) {
    const double Mi = std::max(G[i], -dual.mu[i] / (dual.c * (1.0 + mu2)));
    value += dual.mu[i] * Mi + 0.5 * dual.c * (1.0 + mu2) * Mi * Mi;
  }

  // grad_y L and grad_v L written out per the derivative-space formulas
  Vec grad_yL(dd, 0.0);
  GridFunction grad_vL(grid, Placement::Cell, lay.d);
  {
    auto [gy, gv] = boundary_objective_gradient(spec, grid, y, v);
    grad_yL = gy;
    grad_vL = gv;
  }
  Vec dua(dd), dub(dd);
  auto add_const_grad = [&](const BoundaryFunction& fn, double coef) {
    fn.gradient(ys, ubs, {dua.data(), dd}, {dub.data(), dd});
    for (std::size_t c = 0; c < dd; ++c) grad_yL[c] += coef * (dua[c] + dub[c]);
    for (std::size_t k = 0; k < lay.cells; ++k)
      for (std::size_t c = 0; c < dd; ++c) grad_vL.values[k * dd + c] += coef * dub[c];
  };
  for (std::size_t j = 0; j < ell; ++j) add_const_grad(spec.equalities[j], dual.lambda[j]);
  for (std::size_t i = 0; i < m; ++i) add_const_grad(spec.inequalities[i], dual.mu[i]);

  auto eta_bracket = [&](const BoundaryFunction& fn) {
    fn.gradient(ys, ubs, {dua.data(), dd}, {dub.data(), dd});
    double acc = 0.0;
    for (std::size_t c = 0; c < dd; ++c) acc += (dua[c] + dub[c]) * grad_yL[c];
    for (std::size_t k = 0; k < lay.cells; ++k)
      for (std::size_t c = 0; c < dd; ++c) acc += lay.h * dub[c] * grad_vL.values[k * dd + c];
    return acc;
  };
  double eta = 0.0;
  for (std::size_t j = 0; j < ell; ++j) eta += 0.5 * std::pow(eta_bracket(spec.equalities[j]), 2);
  for (std::size_t i = 0; i < m; ++i)
    eta += 0.5 * std::pow(eta_bracket(spec.inequalities[i]) + G[i] * G[i] * dual.mu[i], 2);
  return value + eta;
}

}  // namespace exalm
