#include <doctest.h>

#include "exalm/auglag.hpp"
#include "exalm/boundary.hpp"
#include "support.hpp"

using namespace exalm;

namespace {

// f(u, xi, x) = xi^2/2 + u^2/2 + u*xi*x  (d = 1, smooth with u-xi coupling)
Integrand1D coupled_integrand() {
  Integrand1D f;
  f.value = [](std::span<const double> u, std::span<const double> xi, double x) {
    return 0.5 * xi[0] * xi[0] + 0.5 * u[0] * u[0] + u[0] * xi[0] * x;
  };
  f.gradient = [](std::span<const double> u, std::span<const double> xi, double x,
                  std::span<double> du, std::span<double> dxi) {
    du[0] = u[0] + xi[0] * x;
    dxi[0] = xi[0] + u[0] * x;
  };
  f.hessian_action = [](std::span<const double>, std::span<const double>, double x,
                        std::span<const double> zu, std::span<const double> zxi,
                        std::span<double> ou, std::span<double> oxi) {
    ou[0] = zu[0] + x * zxi[0];
    oxi[0] = x * zu[0] + zxi[0];
  };
  return f;
}

BoundaryFunction product_constraint() {  // f1 = ua * ub
  BoundaryFunction fn;
  fn.value = [](std::span<const double> ua, std::span<const double> ub) { return ua[0] * ub[0]; };
  fn.gradient = [](std::span<const double> ua, std::span<const double> ub, std::span<double> dua,
                   std::span<double> dub) {
    dua[0] = ub[0];
    dub[0] = ua[0];
  };
  fn.hessian_action = [](std::span<const double>, std::span<const double>,
                         std::span<const double> za, std::span<const double> zb,
                         std::span<double> oa, std::span<double> ob) {
    oa[0] = zb[0];
    ob[0] = za[0];
  };
  return fn;
}

BoundaryFunction quad_inequality() {  // g1 = ua + ub^2 - 2
  BoundaryFunction fn;
  fn.value = [](std::span<const double> ua, std::span<const double> ub) {
    return ua[0] + ub[0] * ub[0] - 2.0;
  };
  fn.gradient = [](std::span<const double>, std::span<const double> ub, std::span<double> dua,
                   std::span<double> dub) {
    dua[0] = 1.0;
    dub[0] = 2.0 * ub[0];
  };
  fn.hessian_action = [](std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<const double> zb, std::span<double> oa,
                         std::span<double> ob) {
    oa[0] = 0.0;
    ob[0] = 2.0 * zb[0];
  };
  return fn;
}

BoundaryFunction quad_cost() {  // f0 = (ua^2 + ub^2)/2
  BoundaryFunction fn;
  fn.value = [](std::span<const double> ua, std::span<const double> ub) {
    return 0.5 * (ua[0] * ua[0] + ub[0] * ub[0]);
  };
  fn.gradient = [](std::span<const double> ua, std::span<const double> ub, std::span<double> dua,
                   std::span<double> dub) {
    dua[0] = ua[0];
    dub[0] = ub[0];
  };
  fn.hessian_action = [](std::span<const double>, std::span<const double>,
                         std::span<const double> za, std::span<const double> zb,
                         std::span<double> oa, std::span<double> ob) {
    oa[0] = za[0];
    ob[0] = zb[0];
  };
  return fn;
}

BoundaryProblemSpec rich_spec() {
  BoundaryProblemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.d = 1;
  spec.f = coupled_integrand();
  spec.f0 = quad_cost();
  spec.equalities.push_back(product_constraint());
  spec.inequalities.push_back(quad_inequality());
  return spec;
}

Integrand1D pure_kinetic() {  // f = xi^2/2
  Integrand1D f;
  f.value = [](std::span<const double>, std::span<const double> xi, double) {
    return 0.5 * xi[0] * xi[0];
  };
  f.gradient = [](std::span<const double>, std::span<const double> xi, double,
                  std::span<double> du, std::span<double> dxi) {
    du[0] = 0.0;
    dxi[0] = xi[0];
  };
  return f;
}

Integrand1D state_only() {  // f = u, so grad_u f = 1
  Integrand1D f;
  f.value = [](std::span<const double> u, std::span<const double>, double) { return u[0]; };
  f.gradient = [](std::span<const double>, std::span<const double>, double, std::span<double> du,
                  std::span<double> dxi) {
    du[0] = 1.0;
    dxi[0] = 0.0;
  };
  return f;
}

BoundaryFunction affine_sum(double target) {  // ua + ub - target
  BoundaryFunction fn;
  fn.value = [target](std::span<const double> ua, std::span<const double> ub) {
    return ua[0] + ub[0] - target;
  };
  fn.gradient = [](std::span<const double>, std::span<const double>, std::span<double> dua,
                   std::span<double> dub) {
    dua[0] = 1.0;
    dub[0] = 1.0;
  };
  fn.hessian_action = [](std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<const double>, std::span<double> oa,
                         std::span<double> ob) {
    oa[0] = 0.0;
    ob[0] = 0.0;
  };
  return fn;
}

}  // namespace

TEST_CASE("constraint values compose affinely through u(b)") {
  BoundaryProblemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.d = 1;
  spec.f = pure_kinetic();
  spec.equalities.push_back(affine_sum(2.0));
  Grid grid = Grid::interval(0.0, 1.0, 16);
  ConstrainedProblem p = assemble_boundary_problem(spec, grid);

  auto gen = testsup::rng(3);
  Vec x = testsup::random_vec(gen, p.x_space.dim());
  const double h = grid.width(0);
  double vsum = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) vsum += h * x[k];
  CHECK(p.eq(x)[0] == doctest::Approx(x[0] + (x[0] + vsum) - 2.0).epsilon(1e-14));

  // g1 = ub at (y, v) = (0, 0) -> 0
  BoundaryProblemSpec spec2 = spec;
  spec2.equalities.clear();
  BoundaryFunction ub_only;
  ub_only.value = [](std::span<const double>, std::span<const double> ub) { return ub[0]; };
  ub_only.gradient = [](std::span<const double>, std::span<const double>, std::span<double> dua,
                        std::span<double> dub) {
    dua[0] = 0.0;
    dub[0] = 1.0;
  };
  spec2.inequalities.push_back(ub_only);
  ConstrainedProblem p2 = assemble_boundary_problem(spec2, grid);
  CHECK(p2.ineq(Vec(p2.x_space.dim(), 0.0))[0] == doctest::Approx(0.0));
}

TEST_CASE("objective gradient: tail integrals at cell centers") {
  Grid grid = Grid::interval(0.0, 1.0, 20);

  // f = xi^2/2, v == k: grad_v == k, grad_y = 0
  BoundaryProblemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.d = 1;
  spec.f = pure_kinetic();
  spec.equalities.push_back(affine_sum(2.0));
  GridFunction v(grid, Placement::Cell, 1);
  v.values.assign(v.values.size(), 0.7);
  auto [gy, gv] = boundary_objective_gradient(spec, grid, {0.3}, v);
  CHECK(gy[0] == doctest::Approx(0.0));
  for (double val : gv.values) CHECK(val == doctest::Approx(0.7).epsilon(1e-14));

  // f = u: grad_v(x) = 1 - x exactly at cell centers, grad_y = 1
  BoundaryProblemSpec spec2 = spec;
  spec2.f = state_only();
  auto gen = testsup::rng(41);
  GridFunction vr = testsup::random_cell_function(gen, grid, 1);
  auto [gy2, gv2] = boundary_objective_gradient(spec2, grid, {0.1}, vr);
  CHECK(gy2[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k < gv2.values.size(); ++k)
    CHECK(gv2.values[k] ==
          doctest::Approx(1.0 - grid.cell_center(0, static_cast<int>(k))).epsilon(1e-13));
}

TEST_CASE("objective gradient passes a directional FD check") {
  Grid grid = Grid::interval(0.0, 1.0, 24);
  BoundaryProblemSpec spec = rich_spec();
  ConstrainedProblem p = assemble_boundary_problem(spec, grid);
  auto gen = testsup::rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x = testsup::random_vec(gen, p.x_space.dim());
    Vec dir = testsup::random_vec(gen, p.x_space.dim());
    const double fd = testsup::directional_fd([&](const Vec& z) { return p.f(z); }, x, dir);
    const double an = p.x_space.dot(p.grad_f(x), dir);
    CHECK(an == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("constraint gradients per the displayed formulas") {
  Grid grid = Grid::interval(0.0, 1.0, 10);
  BoundaryProblemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.d = 1;
  spec.f = pure_kinetic();

  BoundaryFunction ub_only;
  ub_only.value = [](std::span<const double>, std::span<const double> ub) { return ub[0]; };
  ub_only.gradient = [](std::span<const double>, std::span<const double>, std::span<double> dua,
                        std::span<double> dub) {
    dua[0] = 0.0;
    dub[0] = 1.0;
  };
  BoundaryFunction ua_only;
  ua_only.value = [](std::span<const double> ua, std::span<const double>) { return ua[0]; };
  ua_only.gradient = [](std::span<const double>, std::span<const double>, std::span<double> dua,
                        std::span<double> dub) {
    dua[0] = 1.0;
    dub[0] = 0.0;
  };
  spec.equalities.push_back(ub_only);
  spec.equalities.push_back(ua_only);
  spec.equalities.push_back(product_constraint());

  // choose (y, v) with y = 2 and u(b) = 3
  GridFunction v(grid, Placement::Cell, 1);
  v.values.assign(10, 1.0);  // u(b) = y + 1
  auto grads = boundary_constraint_gradients(spec, grid, {2.0}, v);
  REQUIRE(grads.size() == 3);
  CHECK(grads[0].first[0] == doctest::Approx(1.0));  // f = ub: grad_y = 1
  for (double val : grads[0].second.values) CHECK(val == doctest::Approx(1.0));
  CHECK(grads[1].first[0] == doctest::Approx(1.0));  // f = ua: grad_y = 1
  for (double val : grads[1].second.values) CHECK(val == doctest::Approx(0.0));
  CHECK(grads[2].first[0] == doctest::Approx(5.0));  // f = ua ub: 3 + 2
  for (double val : grads[2].second.values) CHECK(val == doctest::Approx(2.0));
}

TEST_CASE("LICQ check") {
  Grid grid = Grid::interval(0.0, 1.0, 12);
  BoundaryProblemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.d = 1;
  spec.f = pure_kinetic();
  spec.equalities.push_back(affine_sum(2.0));
  GridFunction v(grid, Placement::Cell, 1);

  LicqReport ok = check_boundary_licq(spec, grid, {0.0}, v);
  CHECK(ok.pass);
  // grad = (grad_y, grad_v) = (2, 1(.)): Gram = 4 + 1 = 5
  CHECK(ok.min_eigenvalue == doctest::Approx(5.0).epsilon(1e-12));

  spec.equalities.push_back(affine_sum(2.0));  // duplicated row
  LicqReport bad = check_boundary_licq(spec, grid, {0.0}, v);
  CHECK_FALSE(bad.pass);
  CHECK(std::abs(bad.min_eigenvalue) <= 1e-10);

  // active-set detection for inequalities
  BoundaryProblemSpec spec2;
  spec2.a = 0.0;
  spec2.b = 1.0;
  spec2.d = 1;
  spec2.f = pure_kinetic();
  spec2.equalities.push_back(affine_sum(2.0));
  spec2.inequalities.push_back(quad_inequality());  // g = ua + ub^2 - 2 = -2 at zero: inactive
  LicqReport act = check_boundary_licq(spec2, grid, {0.0}, v);
  CHECK(act.active.empty());
  CHECK(act.gram.rows() == 1);
}

TEST_CASE("LICQ eigenvalue cross-checks sigma_max at the benchmark solution") {
  // one equality, no inequalities: E_Q = G^2/2 with G the constraint-gradient
  // Gram matrix, so sigma_max = lambda_min(G)^2 / 2
  Grid grid = Grid::interval(0.0, 1.0, 64);
  BoundaryProblemSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.d = 1;
  spec.f = pure_kinetic();
  spec.equalities.push_back(affine_sum(2.0));
  ConstrainedProblem p = assemble_boundary_problem(spec, grid);

  // the solution u == 1: y = 1, v = 0
  Vec x(p.x_space.dim(), 0.0);
  x[0] = 1.0;
  GridFunction v(grid, Placement::Cell, 1);
  LicqReport licq = check_boundary_licq(spec, grid, {1.0}, v);
  CHECK(licq.pass);
  CHECK(licq.min_eigenvalue == doctest::Approx(5.0).epsilon(1e-12));

  QForm q = q_form(p, x);
  SigmaEstimate sigma = estimate_sigma_max(p, q, 1e-12);
  CHECK(sigma.value == doctest::Approx(0.5 * licq.min_eigenvalue * licq.min_eigenvalue)
                           .epsilon(1e-10));
  CHECK(sigma.value == doctest::Approx(12.5).epsilon(1e-10));
}

TEST_CASE("generic core equals the explicit formula at random points") {
  Grid grid = Grid::interval(0.0, 1.0, 32);
  BoundaryProblemSpec spec = rich_spec();
  ConstrainedProblem p = assemble_boundary_problem(spec, grid);
  auto gen = testsup::rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    Vec x = testsup::random_vec(gen, p.x_space.dim());
    DualState d{testsup::random_vec(gen, 1), testsup::random_vec(gen, 1), 0.5 + trial};
    const double generic = augmented_lagrangian(p, x, d);
    const double explicit_value = boundary_explicit_auglag(spec, grid, x, d);
    CHECK(generic == doctest::Approx(explicit_value).epsilon(1e-10));
  }
}

TEST_CASE("assembled problem: adjoint consistency and analytic gradients") {
  Grid grid = Grid::interval(0.0, 1.0, 25);
  BoundaryProblemSpec spec = rich_spec();
  ConstrainedProblem p = assemble_boundary_problem(spec, grid);
  REQUIRE(p.has_second_order());
  auto gen = testsup::rng(59);

  for (int trial = 0; trial < 10; ++trial) {
    Vec x = testsup::random_vec(gen, p.x_space.dim());
    Vec w = testsup::random_vec(gen, p.x_space.dim());
    Vec lam = testsup::random_vec(gen, 1);
    const double scale = std::max(1.0, p.x_space.norm(w) * p.eq_space.norm(lam));
    CHECK(adjoint_mismatch(p, x, w, lam) <= 1e-10 * scale);
  }

  for (int trial = 0; trial < 10; ++trial) {
    Vec x = testsup::random_vec(gen, p.x_space.dim());
    DualState d{testsup::random_vec(gen, 1), testsup::random_vec(gen, 1), 1.0 + trial};
    AugLagGradient an = augmented_lagrangian_gradient(p, x, d, GradMode::Analytic);
    AugLagGradient fd = augmented_lagrangian_gradient(p, x, d, GradMode::FiniteDifference);
    Vec dx = an.x;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] -= fd.x[i];
    CHECK(p.x_space.norm(dx) <= 1e-6 * std::max(1.0, p.x_space.norm(fd.x)));
    CHECK(an.lambda[0] == doctest::Approx(fd.lambda[0]).epsilon(1e-6));
    CHECK(an.mu[0] == doctest::Approx(fd.mu[0]).epsilon(1e-6));
  }
}

TEST_CASE("grad_v of the classical Lagrangian keeps the P + constants structure") {
  Grid grid = Grid::interval(0.0, 1.0, 18);
  BoundaryProblemSpec spec = rich_spec();
  ConstrainedProblem p = assemble_boundary_problem(spec, grid);
  auto gen = testsup::rng(61);
  Vec x = testsup::random_vec(gen, p.x_space.dim());
  Vec lam = testsup::random_vec(gen, 1);
  Vec mu = testsup::random_vec(gen, 1);

  const Vec grad = classical_lagrangian_gradient_x(p, x, lam, mu);

  // independently: P[y,v] + lambda grad_ub f1 + mu grad_ub g1 (constants)
  const BoundaryLayout lay = boundary_layout(spec, grid);
  GridFunction v = boundary_v(lay, grid, x);
  Vec y(x.begin(), x.begin() + lay.d);
  auto [gy, gv] = boundary_objective_gradient(spec, grid, y, v);
  auto cons = boundary_constraint_gradients(spec, grid, y, v);
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    const double expect =
        gv.values[k] + lam[0] * cons[0].second.values[k] + mu[0] * cons[1].second.values[k];
    CHECK(grad[lay.d + k] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("spec validation rejects inconsistent input") {
  BoundaryProblemSpec spec = rich_spec();
  Grid wrong = Grid::interval(0.0, 2.0, 10);
  CHECK_THROWS_AS(assemble_boundary_problem(spec, wrong), std::invalid_argument);
  BoundaryProblemSpec empty;
  empty.f = pure_kinetic();
  CHECK_THROWS_AS(assemble_boundary_problem(empty, Grid::interval(0.0, 1.0, 10)),
                  std::invalid_argument);
}
