#include <doctest.h>

#include "exalm/kernels.hpp"
#include "support.hpp"

using namespace exalm;

namespace {

struct ParallelGuard {
  bool saved;
  explicit ParallelGuard(bool on) : saved(kern::set_parallel(on)) {}
  ~ParallelGuard() { kern::set_parallel(saved); }
};

}  // namespace

// The OpenMP kernels split work only across independent lines or fixed
// chunks; results must be bitwise identical to the serial references.
TEST_CASE("parallel kernels are bitwise identical to the serial references") {
  auto gen = testsup::rng(99);
  for (auto [pre, n, post] : {std::tuple<std::size_t, std::size_t, std::size_t>{1, 50000, 1},
                              {64, 700, 3},
                              {256, 33, 17},
                              {3, 5, 7}}) {
    std::vector<double> in = testsup::random_vec(gen, pre * n * post);
    const double h = 0.0123;

    std::vector<double> a(pre * (n + 1) * post), b(pre * (n + 1) * post);
    kern::scan_cells_to_nodes_serial(in.data(), pre, n, post, h, a.data());
    {
      ParallelGuard guard(true);
      kern::scan_cells_to_nodes(in.data(), pre, n, post, h, b.data());
    }
    CHECK(a == b);

    std::vector<double> ts(pre * n * post), tp(pre * n * post);
    kern::tail_midpoint_serial(in.data(), pre, n, post, h, ts.data());
    {
      ParallelGuard guard(true);
      kern::tail_midpoint(in.data(), pre, n, post, h, tp.data());
    }
    CHECK(ts == tp);

    if (n >= 2) {
      std::vector<double> as(pre * (n - 1) * post), ap(pre * (n - 1) * post);
      kern::adjacent_average_serial(in.data(), pre, n, post, as.data());
      {
        ParallelGuard guard(true);
        kern::adjacent_average(in.data(), pre, n, post, ap.data());
      }
      CHECK(as == ap);

      kern::forward_difference_serial(in.data(), pre, n, post, h, as.data());
      {
        ParallelGuard guard(true);
        kern::forward_difference(in.data(), pre, n, post, h, ap.data());
      }
      CHECK(as == ap);
    }

    std::vector<double> ms = in, mp = in;
    kern::subtract_line_mean_serial(ms.data(), pre, n, post);
    {
      ParallelGuard guard(true);
      kern::subtract_line_mean(mp.data(), pre, n, post);
    }
    CHECK(ms == mp);

    const double rs = kern::max_abs_line_integral_serial(in.data(), pre, n, post, h);
    double rp;
    {
      ParallelGuard guard(true);
      rp = kern::max_abs_line_integral(in.data(), pre, n, post, h);
    }
    CHECK(rs == rp);
  }
}

TEST_CASE("dot reductions use fixed chunking independent of thread count") {
  auto gen = testsup::rng(7);
  const std::size_t n = 300000;
  std::vector<double> a = testsup::random_vec(gen, n), b = testsup::random_vec(gen, n),
                      w = testsup::random_vec(gen, n, 0.1);
  const double s0 = kern::dot_serial(a.data(), b.data(), n);
  const double w0 = kern::dot_weighted_serial(a.data(), b.data(), w.data(), n);
  ParallelGuard guard(true);
  CHECK(kern::dot(a.data(), b.data(), n) == s0);
  CHECK(kern::dot_weighted(a.data(), b.data(), w.data(), n) == w0);
}

TEST_CASE("tail_midpoint is the adjoint of the midpoint cumulative map") {
  // <avg(scan v), w> == <v, tail w> with unit weights folded into h
  auto gen = testsup::rng(21);
  const std::size_t n = 37;
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> v = testsup::random_vec(gen, n), w = testsup::random_vec(gen, n);
  std::vector<double> nodes(n + 1), centers(n), tail(n);
  kern::scan_cells_to_nodes_serial(v.data(), 1, n, 1, h, nodes.data());
  kern::adjacent_average_serial(nodes.data(), 1, n + 1, 1, centers.data());
  kern::tail_midpoint_serial(w.data(), 1, n, 1, h, tail.data());
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lhs += centers[i] * w[i];
    rhs += v[i] * tail[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}
