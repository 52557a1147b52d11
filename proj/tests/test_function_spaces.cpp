#include <doctest.h>

#include "exalm/function_spaces.hpp"
#include "support.hpp"

using namespace exalm;

namespace {

Grid box2() { return Grid::box({{0.0, 1.0, 8}, {0.0, 1.0, 6}}); }
Grid box3() { return Grid::box({{0.0, 1.0, 5}, {0.0, 2.0, 4}, {-1.0, 1.0, 6}}); }

double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("cumulative integral on an interval") {
  Grid g = Grid::interval(0.0, 1.0, 4);

  GridFunction ones(g, Placement::Cell, 1);
  ones.values.assign(4, 1.0);
  GridFunction u = cumulative_integral_1d({0.0}, ones);
  const Vec expect{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(u.values == expect);

  GridFunction zero(g, Placement::Cell, 1);
  GridFunction u2 = cumulative_integral_1d({2.0}, zero);
  for (double v : u2.values) CHECK(v == 2.0);

  // v_k = cell midpoint: u(1) = sum h * midpoints = 1/2 exactly
  GridFunction mid(g, Placement::Cell, 1);
  for (int k = 0; k < 4; ++k) mid.values[static_cast<std::size_t>(k)] = g.cell_center(0, k);
  GridFunction u3 = cumulative_integral_1d({0.0}, mid);
  CHECK(u3.values.back() == 0.5);

  CHECK_THROWS_AS(cumulative_integral_1d({0.0, 0.0}, ones), std::invalid_argument);
}

TEST_CASE("box cumulative integral and the mixed-derivative round trip") {
  Grid g = box2();
  GridFunction ones(g, Placement::Cell, 1);
  ones.values.assign(ones.values.size(), 1.0);
  GridFunction u = cumulative_integral_box(ones);
  // u(node x) = x1 * x2, boundary nodes with any zero index carry 0
  for (std::size_t site = 0; site < u.site_count(); ++site) {
    const std::vector<double> x = u.site_coords(site);
    CHECK(u.at(site, 0) == doctest::Approx(x[0] * x[1]).epsilon(1e-14));
  }

  GridFunction zero(g, Placement::Cell, 1);
  GridFunction u0 = cumulative_integral_box(zero);
  for (double v : u0.values) CHECK(v == 0.0);

  // round trip D^(1,..,1)(A v) = v to 1e-13 relative, n in {1,2,3}
  auto gen = testsup::rng(5);
  for (const Grid& grid : {Grid::interval(0.0, 1.0, 64), box2(), box3()}) {
    GridFunction v = testsup::random_cell_function(gen, grid, 2);
    GridFunction back = mixed_forward_difference(cumulative_integral_box(v));
    double scale = 0.0;
    for (double val : v.values) scale = std::max(scale, std::abs(val));
    CHECK(max_abs_diff(back.values, v.values) <= 1e-13 * scale);
  }
}

TEST_CASE("zero-mean residuals") {
  Grid g = Grid::interval(0.0, 1.0, 10);
  GridFunction zero(g, Placement::Cell, 1);
  CHECK(zero_mean_residuals(zero) == Vec{0.0});

  GridFunction ones(g, Placement::Cell, 1);
  ones.values.assign(10, 1.0);
  CHECK(zero_mean_residuals(ones) == Vec{1.0});

  auto gen = testsup::rng(17);
  for (const Grid& grid : {Grid::interval(0.0, 1.0, 50), box2(), box3()}) {
    GridFunction w = testsup::random_cell_function(gen, grid, 1, 2.0);
    GridFunction p = project_zero_mean(w);
    for (double r : zero_mean_residuals(p)) CHECK(r <= 1e-12);
  }
}

TEST_CASE("projection onto the zero-axis-mean subspace") {
  // n=1 closed form: subtract the mean
  Grid g1 = Grid::interval(0.0, 1.0, 12);
  GridFunction three(g1, Placement::Cell, 1);
  three.values.assign(12, 3.0);
  GridFunction p1 = project_zero_mean(three);
  for (double v : p1.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

  auto gen = testsup::rng(31);
  GridFunction w = testsup::random_cell_function(gen, g1, 1);
  double mean = 0.0;
  for (double v : w.values) mean += v;
  mean /= 12.0;
  GridFunction pw = project_zero_mean(w);
  for (std::size_t i = 0; i < pw.values.size(); ++i)
    CHECK(pw.values[i] == doctest::Approx(w.values[i] - mean).epsilon(1e-14));

  // identity on X
  GridFunction again = project_zero_mean(pw);
  CHECK(max_abs_diff(again.values, pw.values) <= 1e-13);

  // n=2, v(x) = x1: x1 is constant along axis 2, hence orthogonal to X;
  // inclusion-exclusion of the axis means annihilates it.
  Grid g2 = box2();
  GridFunction vx1(g2, Placement::Cell, 1);
  for (std::size_t site = 0; site < vx1.site_count(); ++site)
    vx1.values[site] = vx1.site_coords(site)[0];
  GridFunction px1 = project_zero_mean(vx1);
  for (double v : px1.values) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("projection is idempotent, self-adjoint and norm-nonincreasing") {
  auto gen = testsup::rng(43);
  for (const Grid& grid : {Grid::interval(0.0, 1.0, 40), box2(), box3()}) {
    GridFunction a = testsup::random_cell_function(gen, grid, 2);
    GridFunction b = testsup::random_cell_function(gen, grid, 2);
    GridFunction pa = project_zero_mean(a);
    GridFunction pb = project_zero_mean(b);

    GridFunction ppa = project_zero_mean(pa);
    CHECK(max_abs_diff(ppa.values, pa.values) <= 1e-13);

    CHECK(inner_product(pa, b) == doctest::Approx(inner_product(a, pb)).epsilon(1e-12));
    CHECK(l2_norm(pa) <= l2_norm(a) * (1.0 + 1e-14));

    // orthogonality: <a - proj a, proj b> = 0
    GridFunction residual = a;
    for (std::size_t i = 0; i < residual.values.size(); ++i) residual.values[i] -= pa.values[i];
    CHECK(std::abs(inner_product(residual, pb)) <= 1e-12 * (1.0 + l2_norm(a) * l2_norm(b)));
  }
}

TEST_CASE("inner product: rectangle rule on cells") {
  Grid g = Grid::interval(0.0, 1.0, 4);
  GridFunction a(g, Placement::Cell, 1), b(g, Placement::Cell, 1);
  a.values.assign(4, 1.0);
  b.values.assign(4, 1.0);
  CHECK(inner_product(a, b) == doctest::Approx(1.0));

  // one cell of width 1/4
  GridFunction e(g, Placement::Cell, 1);
  e.values[2] = 1.0;
  CHECK(inner_product(e, e) == doctest::Approx(0.25));

  // projected function against a constant
  auto gen = testsup::rng(3);
  GridFunction w = testsup::random_cell_function(gen, g, 1);
  GridFunction pw = project_zero_mean(w);
  CHECK(std::abs(inner_product(pw, a)) <= 1e-12);

  GridFunction wrong(Grid::interval(0.0, 1.0, 5), Placement::Cell, 1);
  CHECK_THROWS_AS(inner_product(a, wrong), std::invalid_argument);
}

TEST_CASE("node calculus helpers agree with the tensor-product adjoints") {
  // <centers(A v), w>_L2 = <v, tail(w)>_L2 and the per-axis variant
  auto gen = testsup::rng(77);
  for (const Grid& grid : {Grid::interval(0.0, 1.0, 30), box2(), box3()}) {
    GridFunction v = testsup::random_cell_function(gen, grid, 2);
    GridFunction w = testsup::random_cell_function(gen, grid, 2);
    GridFunction uc = node_to_centers(cumulative_integral_box(v));
    CHECK(inner_product(uc, w) ==
          doctest::Approx(inner_product(v, tail_integral(w))).epsilon(1e-12));
    for (int axis = 0; axis < grid.dim(); ++axis) {
      GridFunction dv = node_axis_derivative(cumulative_integral_box(v), axis);
      CHECK(inner_product(dv, w) ==
            doctest::Approx(inner_product(v, tail_integral_skip(w, axis))).epsilon(1e-12));
    }
  }
}
