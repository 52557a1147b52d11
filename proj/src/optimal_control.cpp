#include "exalm/optimal_control.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace exalm {

LinearSystem LinearSystem::make(Eigen::MatrixXd A, Eigen::MatrixXd B, double T, int K,
                                Propagator mode) {
  if (A.rows() != A.cols()) throw std::invalid_argument("linear system: generator must be square");
  if (B.rows() != A.rows()) throw std::invalid_argument("linear system: input row mismatch");
  if (!(T > 0.0)) throw std::invalid_argument("linear system: horizon must be positive");
  if (K < 2) throw std::invalid_argument("linear system: needs at least two time steps");

  LinearSystem sys;
  sys.generator = std::move(A);
  sys.input = std::move(B);
  sys.horizon = T;
  sys.steps = K;
  sys.mode = mode;

  const double dt = sys.dt();
  const int h = sys.state_dim();
  if (mode == Propagator::MatrixExponential) {
    // exp of the augmented block matrix yields Phi and int_0^dt exp(A s) ds
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * h, 2 * h);
    M.topLeftCorner(h, h) = sys.generator * dt;
    M.topRightCorner(h, h) = Eigen::MatrixXd::Identity(h, h) * dt;
    Eigen::MatrixXd E = M.exp();
    sys.phi = E.topLeftCorner(h, h);
    sys.gamma = E.topRightCorner(h, h) * sys.input;
  } else {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(h, h);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - 0.5 * dt * sys.generator);
    sys.phi = lu.solve(I + 0.5 * dt * sys.generator);
    sys.gamma = lu.solve(dt * sys.input);
  }
  return sys;
}

double ControlFunction::l2_norm() const { return std::sqrt(control_inner(*this, *this)); }

double control_inner(const ControlFunction& a, const ControlFunction& b) {
  if (a.values.size() != b.values.size() || a.dt != b.dt)
    throw std::invalid_argument("control_inner: shape mismatch");
  return a.dt * kern::dot(a.values.data(), b.values.data(), a.values.size());
}

Eigen::VectorXd input_map(const LinearSystem& sys, const ControlFunction& u) {
  if (u.steps != sys.steps || u.u_dim != sys.control_dim())
    throw std::invalid_argument("input_map: control shape mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.state_dim());
  Eigen::Map<const Eigen::MatrixXd> U(u.values.data(), sys.control_dim(), sys.steps);
  for (int k = 0; k < sys.steps; ++k) x = sys.phi * x + sys.gamma * U.col(k);
  return x;
}

ControlFunction adjoint_input_map(const LinearSystem& sys, const Eigen::VectorXd& lambda) {
  if (lambda.size() != sys.state_dim())
    throw std::invalid_argument("adjoint_input_map: state dimension mismatch");
  ControlFunction out(sys);
  const double inv_dt = 1.0 / sys.dt();
  Eigen::VectorXd p = lambda;
  for (int k = sys.steps - 1; k >= 0; --k) {
    Eigen::VectorXd row = inv_dt * (sys.gamma.transpose() * p);
    for (int c = 0; c < sys.control_dim(); ++c) out.at(k, c) = row(c);
    p = sys.phi.transpose() * p;
  }
  return out;
}

Eigen::MatrixXd gramian(const LinearSystem& sys) {
  const int h = sys.state_dim();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(h, h);
  Eigen::MatrixXd C = sys.gamma;  // Phi^m Gamma, m = 0..K-1
  const double inv_dt = 1.0 / sys.dt();
  for (int m = 0; m < sys.steps; ++m) {
    W.noalias() += inv_dt * C * C.transpose();
    if (m + 1 < sys.steps) C = sys.phi * C;
  }
  return 0.5 * (W + W.transpose());
}

Eigen::VectorXd oc_target(const LinearSystem& sys, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& xT) {
  Eigen::VectorXd drift = x0;
  for (int k = 0; k < sys.steps; ++k) drift = sys.phi * drift;
  return xT - drift;
}

MinEnergyResult min_energy_oracle(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                  const Eigen::VectorXd& xT) {
  const Eigen::MatrixXd W = gramian(sys);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(W.rows() - 1);
  if (lmin <= 1e-10)
    throw std::runtime_error("min_energy_oracle: Gramian singular, system not exactly "
                             "controllable at this horizon (lambda_min = " + std::to_string(lmin) + ")");

  const Eigen::VectorXd xhat = oc_target(sys, x0, xT);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(W);
  Eigen::VectorXd lambda = ldlt.solve(-xhat);
  lambda -= ldlt.solve(W * lambda + xhat);  // one step of iterative refinement

  MinEnergyResult res;
  res.lambda = lambda;
  res.u = adjoint_input_map(sys, lambda);
  for (double& v : res.u.values) v = -v;  // u* = -F_T* lambda
  res.value = 0.5 * control_inner(res.u, res.u);
  res.gramian_lambda_min = lmin;
  res.gramian_cond = lmax / lmin;
  res.residual = (input_map(sys, res.u) - xhat).norm();
  return res;
}

ControlFunction oc_unpack(const LinearSystem& sys, const Vec& x) {
  ControlFunction u(sys);
  if (x.size() != u.values.size()) throw std::invalid_argument("oc_unpack: size mismatch");
  u.values = x;
  return u;
}

ConstrainedProblem assemble_oc_problem(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& xT) {
  ConstrainedProblem p;
  const std::size_t udim = static_cast<std::size_t>(sys.control_dim()) * static_cast<std::size_t>(sys.steps);
  p.x_space = WeightedSpace::scaled(udim, sys.dt());
  p.eq_space = WeightedSpace::euclidean(static_cast<std::size_t>(sys.state_dim()));
  p.ineq_count = 0;

  // the system is held by value; the target offset is precomputed
  const LinearSystem s = sys;
  Vec xhat(static_cast<std::size_t>(sys.state_dim()));
  {
    Eigen::VectorXd t = oc_target(sys, x0, xT);
    for (int i = 0; i < t.size(); ++i) xhat[static_cast<std::size_t>(i)] = t(i);
  }

  p.f = [s](const Vec& x) {
    ControlFunction u = oc_unpack(s, x);
    return 0.5 * control_inner(u, u);
  };
  p.grad_f = [](const Vec& x) { return x; };  // Riesz gradient of 1/2||u||^2 in L2
  p.eq = [s, xhat](const Vec& x) {
    Eigen::VectorXd F = input_map(s, oc_unpack(s, x));
    Vec out(xhat.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = F(static_cast<Eigen::Index>(i)) - xhat[i];
    return out;
  };
  p.eq_jvp = [s](const Vec&, const Vec& w) {
    Eigen::VectorXd F = input_map(s, oc_unpack(s, w));
    Vec out(static_cast<std::size_t>(F.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = F(static_cast<Eigen::Index>(i));
    return out;
  };
  p.eq_adj = [s](const Vec&, const Vec& lam) {
    Eigen::VectorXd l(static_cast<Eigen::Index>(lam.size()));
    for (std::size_t i = 0; i < lam.size(); ++i) l(static_cast<Eigen::Index>(i)) = lam[i];
    return adjoint_input_map(s, l).values;
  };
  p.lagr_hvp = [](const Vec&, const Vec&, const Vec&, const Vec& w) { return w; };
  p.eq_adj_dir = [udim](const Vec&, const Vec&, const Vec&) { return Vec(udim, 0.0); };
  return p;
}

double eval_exact_penalty_oc(const LinearSystem& sys, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& xT, const ControlFunction& u, double c) {
  if (c <= 0.0) throw std::invalid_argument("eval_exact_penalty_oc: c must be positive");
  const Eigen::VectorXd miss = input_map(sys, u) - oc_target(sys, x0, xT);
  return 0.5 * control_inner(u, u) + c * miss.norm();
}

}  // namespace exalm
