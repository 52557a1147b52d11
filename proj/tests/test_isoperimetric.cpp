#include <doctest.h>

#include "exalm/auglag.hpp"
#include "exalm/catalog.hpp"
#include "exalm/isoperimetric.hpp"
#include "support.hpp"

using namespace exalm;

namespace {

IntegrandND kinetic_half() {  // f = xi^2/2 (d = 1, any n = 1 use)
  IntegrandND f;
  f.value = [](std::span<const double>, std::span<const double> xi, std::span<const double>) {
    return 0.5 * xi[0] * xi[0];
  };
  f.gradient = [](std::span<const double>, std::span<const double> xi, std::span<const double>,
                  std::span<double> du, std::span<double> dxi) {
    du[0] = 0.0;
    dxi[0] = xi[0];
  };
  f.hessian_action = [](std::span<const double>, std::span<const double>, std::span<const double>,
                        std::span<const double>, std::span<const double> zxi, std::span<double> ou,
                        std::span<double> oxi) {
    ou[0] = 0.0;
    oxi[0] = zxi[0];
  };
  return f;
}

IntegrandND state_linear(int n) {  // f = u (gradient du = 1, no xi dependence)
  IntegrandND f;
  f.value = [](std::span<const double> u, std::span<const double>, std::span<const double>) {
    return u[0];
  };
  f.gradient = [n](std::span<const double>, std::span<const double>, std::span<const double>,
                   std::span<double> du, std::span<double> dxi) {
    du[0] = 1.0;
    for (int a = 0; a < n; ++a) dxi[static_cast<std::size_t>(a)] = 0.0;
  };
  f.hessian_action = [n](std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<double> ou, std::span<double> oxi) {
    ou[0] = 0.0;
    for (int a = 0; a < n; ++a) oxi[static_cast<std::size_t>(a)] = 0.0;
  };
  return f;
}

IntegrandND constant_integrand(int n) {  // f = 3 (depends on neither u nor xi)
  IntegrandND f;
  f.value = [](std::span<const double>, std::span<const double>, std::span<const double>) {
    return 3.0;
  };
  f.gradient = [n](std::span<const double>, std::span<const double>, std::span<const double>,
                   std::span<double> du, std::span<double> dxi) {
    du[0] = 0.0;
    for (int a = 0; a < n; ++a) dxi[static_cast<std::size_t>(a)] = 0.0;
  };
  return f;
}

IsoperimetricSpec benchmark_spec(int cells, double zeta) {
  IsoperimetricSpec spec;
  spec.grid = Grid::interval(0.0, 1.0, cells);
  spec.d = 1;
  IntegrandND f0 = kinetic_half();  // scaled below to xi^2
  f0.value = [](std::span<const double>, std::span<const double> xi, std::span<const double>) {
    return xi[0] * xi[0];
  };
  f0.gradient = [](std::span<const double>, std::span<const double> xi, std::span<const double>,
                   std::span<double> du, std::span<double> dxi) {
    du[0] = 0.0;
    dxi[0] = 2.0 * xi[0];
  };
  f0.hessian_action = [](std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<const double>,
                         std::span<const double> zxi, std::span<double> ou,
                         std::span<double> oxi) {
    ou[0] = 0.0;
    oxi[0] = 2.0 * zxi[0];
  };
  spec.f0 = f0;
  spec.f1 = state_linear(1);
  spec.zeta = zeta;
  return spec;
}

GridFunction project_random(std::mt19937_64& gen, const Grid& grid, int comps) {
  return project_zero_mean(testsup::random_cell_function(gen, grid, comps));
}

}  // namespace

TEST_CASE("P kernel on an interval") {
  IsoperimetricSpec spec;
  spec.grid = Grid::interval(0.0, 1.0, 16);
  spec.d = 1;
  spec.f0 = kinetic_half();
  spec.f1 = state_linear(1);

  // f = xi^2/2, v == k in X? constant is not zero-mean, use k * (projected bump)
  auto gen = testsup::rng(5);
  GridFunction v = project_random(gen, spec.grid, 1);
  GridFunction P = eval_P(spec, 0, v);
  for (std::size_t i = 0; i < P.values.size(); ++i)
    CHECK(P.values[i] == doctest::Approx(v.values[i]).epsilon(1e-13));

  // integrand without u or xi dependence: P == 0
  IsoperimetricSpec spec2 = spec;
  spec2.f0 = constant_integrand(1);
  GridFunction P2 = eval_P(spec2, 0, v);
  for (double val : P2.values) CHECK(val == 0.0);

  // f = u on (0,1): P(v)(x) = 1 - x at cell centers (tail integral of 1)
  GridFunction P1 = eval_P(spec, 1, v);
  for (std::size_t k = 0; k < P1.values.size(); ++k)
    CHECK(P1.values[k] ==
          doctest::Approx(1.0 - spec.grid.cell_center(0, static_cast<int>(k))).epsilon(1e-13));

  // zero-mean membership is a precondition
  GridFunction bad(spec.grid, Placement::Cell, 1);
  bad.values.assign(bad.values.size(), 1.0);
  CHECK_THROWS_AS(eval_P(spec, 0, bad), std::invalid_argument);
}

TEST_CASE("P kernel on a box: double tail integral of grad_u f = 1") {
  IsoperimetricSpec spec;
  spec.grid = Grid::box({{0.0, 1.0, 9}, {0.0, 1.0, 7}});
  spec.d = 1;
  IntegrandND f0 = state_linear(2);
  spec.f0 = f0;
  spec.f1 = constant_integrand(2);
  auto gen = testsup::rng(7);
  GridFunction v = project_random(gen, spec.grid, 1);
  GridFunction P = eval_P(spec, 0, v);
  for (std::size_t cell = 0; cell < P.site_count(); ++cell) {
    const std::vector<double> x = P.site_coords(cell);
    CHECK(P.values[cell] == doctest::Approx((1.0 - x[0]) * (1.0 - x[1])).epsilon(1e-13));
  }
}

TEST_CASE("objective gradient is the projected kernel") {
  // f0 = u on (0,1): proj of (1 - x) = 1/2 - x
  IsoperimetricSpec spec;
  spec.grid = Grid::interval(0.0, 1.0, 40);
  spec.d = 1;
  spec.f0 = state_linear(1);
  spec.f1 = constant_integrand(1);
  GridFunction zero(spec.grid, Placement::Cell, 1);
  GridFunction g = iso_objective_gradient(spec, zero);
  for (std::size_t k = 0; k < g.values.size(); ++k)
    CHECK(g.values[k] ==
          doctest::Approx(0.5 - spec.grid.cell_center(0, static_cast<int>(k))).epsilon(1e-12));

  // f0 = xi^2 at v = 0: gradient 0
  IsoperimetricSpec bench = benchmark_spec(40, 1.0);
  GridFunction g0 = iso_objective_gradient(bench, zero);
  for (double val : g0.values) CHECK(val == 0.0);
}

TEST_CASE("gradients are FD-consistent along directions in X") {
  IsoperimetricSpec spec = benchmark_spec(30, 1.0);
  // include a nonzero boundary datum to exercise the offset path
  GridFunction ubar(spec.grid, Placement::Node, 1);
  for (std::size_t node = 0; node < ubar.site_count(); ++node) {
    const double x = ubar.site_coords(node)[0];
    ubar.values[node] = 0.3 * x * x;
  }
  spec.ubar = ubar;

  ConstrainedProblem p = assemble_isoperimetric_problem(spec);
  auto gen = testsup::rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x = project_random(gen, spec.grid, 1).values;
    Vec dir = project_random(gen, spec.grid, 1).values;
    const double fd = testsup::directional_fd([&](const Vec& z) { return p.f(z); }, x, dir);
    const double an = p.x_space.dot(p.grad_f(x), dir);
    CHECK(an == doctest::Approx(fd).epsilon(1e-6));

    const double fdF =
        testsup::directional_fd([&](const Vec& z) { return p.eq(z)[0]; }, x, dir);
    CHECK(p.eq_jvp(x, dir)[0] == doctest::Approx(fdF).epsilon(1e-6));
  }
}

TEST_CASE("assembled problem basics") {
  IsoperimetricSpec spec = benchmark_spec(50, 0.0);
  // zeta = I1(ubar) = 0 with ubar = 0 and v = 0: F(0) = 0
  ConstrainedProblem p = assemble_isoperimetric_problem(spec);
  Vec zero(spec.grid.cell_count(), 0.0);
  CHECK(p.eq(zero)[0] == doctest::Approx(0.0));

  // oracle KKT triple of the catalog benchmark is feasible and stationary
  Benchmark bench = make_benchmark("iso-dirichlet", {{"cells", 64}});
  REQUIRE(bench.oracle.has_value());
  KKTResidual r = kkt_residual(bench.problem, bench.oracle->x, bench.oracle->dual);
  CHECK(r.max() <= 1e-8);

  // KKT identity through every tested c
  for (double c : {1.0, 10.0, 100.0}) {
    DualState d = bench.oracle->dual;
    d.c = c;
    CHECK(augmented_lagrangian(bench.problem, bench.oracle->x, d) ==
          doctest::Approx(bench.oracle->value).epsilon(1e-12));
  }
}

TEST_CASE("Q form reduces to the closed formula in the multiplier") {
  IsoperimetricSpec spec = benchmark_spec(36, 1.0);
  ConstrainedProblem p = assemble_isoperimetric_problem(spec);
  auto gen = testsup::rng(13);
  GridFunction v = project_random(gen, spec.grid, 1);
  GridFunction p1 = project_zero_mean(eval_P(spec, 1, v));
  const double norm2 = inner_product(p1, p1);
  QForm q = q_form(p, v.values);
  for (double lambda : {1.0, -2.5, 0.3}) {
    const double closed = 0.5 * norm2 * norm2 * lambda * lambda;
    CHECK(q.eval({lambda}, {}) == doctest::Approx(closed).epsilon(1e-10));
  }
  // sigma_max = 1/2 ||proj P1||^4 for the scalar multiplier
  CHECK(estimate_sigma_max(p, q, 1e-12).value == doctest::Approx(0.5 * norm2 * norm2).epsilon(1e-10));
}

TEST_CASE("affine constraint integrand: projected kernel is constant in v") {
  IsoperimetricSpec spec = benchmark_spec(44, 1.0);
  auto gen = testsup::rng(17);
  GridFunction ref = project_zero_mean(eval_P(spec, 1, project_random(gen, spec.grid, 1)));
  for (int trial = 0; trial < 5; ++trial) {
    GridFunction p1 = project_zero_mean(eval_P(spec, 1, project_random(gen, spec.grid, 1)));
    for (std::size_t i = 0; i < p1.values.size(); ++i)
      CHECK(std::abs(p1.values[i] - ref.values[i]) <= 1e-12);
  }
}

TEST_CASE("generic core equals the explicit formula") {
  IsoperimetricSpec spec = benchmark_spec(28, 1.0);
  ConstrainedProblem p = assemble_isoperimetric_problem(spec);
  auto gen = testsup::rng(19);
  for (int trial = 0; trial < 8; ++trial) {
    GridFunction v = project_random(gen, spec.grid, 1);
    const double lambda = testsup::random_vec(gen, 1)[0];
    const double c = 0.5 + trial;
    const double generic = augmented_lagrangian(p, v.values, {{lambda}, {}, c});
    const double explicit_value = iso_explicit_auglag(spec, v, lambda, c);
    CHECK(generic == doctest::Approx(explicit_value).epsilon(1e-10));
  }
}

TEST_CASE("analytic vs FD gradients of the augmented Lagrangian") {
  IsoperimetricSpec spec = benchmark_spec(20, 1.0);
  ConstrainedProblem p = assemble_isoperimetric_problem(spec);
  REQUIRE(p.has_second_order());
  auto gen = testsup::rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x = project_random(gen, spec.grid, 1).values;
    DualState d{testsup::random_vec(gen, 1), {}, 1.0 + trial};
    AugLagGradient an = augmented_lagrangian_gradient(p, x, d, GradMode::Analytic);
    AugLagGradient fd = augmented_lagrangian_gradient(p, x, d, GradMode::FiniteDifference);
    Vec dx = an.x;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] -= fd.x[i];
    CHECK(p.x_space.norm(dx) <= 1e-6 * std::max(1.0, p.x_space.norm(fd.x)));
    CHECK(an.lambda[0] == doctest::Approx(fd.lambda[0]).epsilon(1e-6));
  }
}
