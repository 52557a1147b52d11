#pragma once

#include <random>

#include "exalm/auglag.hpp"
#include "exalm/function_spaces.hpp"
#include "exalm/problem.hpp"

// Shared helpers for the test suites: seeded random fields, finite
// differences, and small finite-dimensional toy problems.

namespace testsup {

using exalm::ConstrainedProblem;
using exalm::DualState;
using exalm::GridFunction;
using exalm::Vec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec random_vec(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vec v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

inline GridFunction random_cell_function(std::mt19937_64& gen, const exalm::Grid& grid, int comps,
                                         double scale = 1.0) {
  GridFunction f(grid, exalm::Placement::Cell, comps);
  f.values = random_vec(gen, f.values.size(), scale);
  return f;
}

/// Central finite difference of a scalar functional along a direction.
template <class F>
double directional_fd(F&& f, const Vec& x, const Vec& dir, double eps = 1e-6) {
  Vec hi = x, lo = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    hi[i] += eps * dir[i];
    lo[i] -= eps * dir[i];
  }
  return (f(hi) - f(lo)) / (2.0 * eps);
}

/// Finite toy: min x^2 s.t. x - 1 = 0 (one variable, one equality).
inline ConstrainedProblem toy_equality() {
  ConstrainedProblem p;
  p.x_space = exalm::WeightedSpace::euclidean(1);
  p.eq_space = exalm::WeightedSpace::euclidean(1);
  p.f = [](const Vec& x) { return x[0] * x[0]; };
  p.grad_f = [](const Vec& x) { return Vec{2.0 * x[0]}; };
  p.eq = [](const Vec& x) { return Vec{x[0] - 1.0}; };
  p.eq_jvp = [](const Vec&, const Vec& w) { return Vec{w[0]}; };
  p.eq_adj = [](const Vec&, const Vec& l) { return Vec{l[0]}; };
  p.lagr_hvp = [](const Vec&, const Vec&, const Vec&, const Vec& w) { return Vec{2.0 * w[0]}; };
  p.eq_adj_dir = [](const Vec&, const Vec&, const Vec&) { return Vec{0.0}; };
  return p;
}

/// Finite toy: f = 0, one inequality g(x) = x <= 0.
inline ConstrainedProblem toy_inequality() {
  ConstrainedProblem p;
  p.x_space = exalm::WeightedSpace::euclidean(1);
  p.eq_space = exalm::WeightedSpace::euclidean(0);
  p.ineq_count = 1;
  p.f = [](const Vec&) { return 0.0; };
  p.grad_f = [](const Vec&) { return Vec{0.0}; };
  p.ineq = [](const Vec& x) { return Vec{x[0]}; };
  p.ineq_grad = [](const Vec&, int) { return Vec{1.0}; };
  p.lagr_hvp = [](const Vec&, const Vec&, const Vec&, const Vec&) { return Vec{0.0}; };
  p.ineq_hvp = [](const Vec&, int, const Vec&) { return Vec{0.0}; };
  return p;
}

/// Smooth nonconvex toy in R^3 with two nonlinear equalities and two
/// inequalities: exercises every analytic-gradient code path.
inline ConstrainedProblem toy_full() {
  ConstrainedProblem p;
  p.x_space = exalm::WeightedSpace::euclidean(3);
  p.eq_space = exalm::WeightedSpace::euclidean(2);
  p.ineq_count = 2;
  p.f = [](const Vec& x) {
    return x[0] * x[0] + 0.5 * std::pow(x[1], 4) + x[0] * x[2] + std::sin(x[1]);
  };
  p.grad_f = [](const Vec& x) {
    return Vec{2.0 * x[0] + x[2], 2.0 * std::pow(x[1], 3) + std::cos(x[1]), x[0]};
  };
  p.eq = [](const Vec& x) { return Vec{x[0] * x[1] - 1.0, x[2] * x[2] + x[0] - 2.0}; };
  p.eq_jvp = [](const Vec& x, const Vec& w) {
    return Vec{x[1] * w[0] + x[0] * w[1], w[0] + 2.0 * x[2] * w[2]};
  };
  p.eq_adj = [](const Vec& x, const Vec& l) {
    return Vec{x[1] * l[0] + l[1], x[0] * l[0], 2.0 * x[2] * l[1]};
  };
  p.ineq = [](const Vec& x) { return Vec{x[0] + x[1] - 0.1, -x[2] + x[1] * x[1] - 5.0}; };
  p.ineq_grad = [](const Vec& x, int i) {
    return i == 0 ? Vec{1.0, 1.0, 0.0} : Vec{0.0, 2.0 * x[1], -1.0};
  };
  p.lagr_hvp = [](const Vec& x, const Vec& l, const Vec& m, const Vec& w) {
    // Hess f + l0 Hess F0 + l1 Hess F1 + m1 Hess g1 (g0 affine)
    Vec out(3, 0.0);
    out[0] = 2.0 * w[0] + w[2];
    out[1] = (6.0 * x[1] * x[1] - std::sin(x[1])) * w[1];
    out[2] = w[0];
    out[0] += l[0] * w[1];
    out[1] += l[0] * w[0];
    out[2] += l[1] * 2.0 * w[2];
    out[1] += m[1] * 2.0 * w[1];
    return out;
  };
  p.eq_adj_dir = [](const Vec&, const Vec& psi, const Vec& w) {
    // d/dt DF(x+tw)^T psi: psi0 * Hess F0 w + psi1 * Hess F1 w
    Vec out(3, 0.0);
    out[0] += psi[0] * w[1];
    out[1] += psi[0] * w[0];
    out[2] += psi[1] * 2.0 * w[2];
    return out;
  };
  p.ineq_hvp = [](const Vec&, int i, const Vec& w) {
    return i == 0 ? Vec{0.0, 0.0, 0.0} : Vec{0.0, 2.0 * w[1], 0.0};
  };
  return p;
}

}  // namespace testsup
