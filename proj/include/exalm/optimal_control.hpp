#pragma once

#include <Eigen/Dense>

#include "exalm/problem.hpp"

namespace exalm {

// Fixed-endpoint minimum-energy control of a discretized linear evolution
// system x' = A x + B u, handled discretize-then-optimize: the step
// propagator and its adjoint are exact transposes, so the input-map
// adjointness and the Gramian identities hold to machine precision.

struct LinearSystem {
  enum class Propagator { MatrixExponential, ImplicitMidpoint };

  Eigen::MatrixXd generator;  // A, h x h
  Eigen::MatrixXd input;      // B, h x u_dim
  double horizon = 1.0;       // T
  int steps = 2;              // K uniform cells of width T/K
  Propagator mode = Propagator::MatrixExponential;

  // derived one-step maps: x_{k+1} = phi x_k + gamma u_k
  Eigen::MatrixXd phi;
  Eigen::MatrixXd gamma;

  static LinearSystem make(Eigen::MatrixXd A, Eigen::MatrixXd B, double T, int K,
                           Propagator mode = Propagator::MatrixExponential);

  int state_dim() const { return static_cast<int>(generator.rows()); }
  int control_dim() const { return static_cast<int>(input.cols()); }
  double dt() const { return horizon / steps; }
};

/// Piecewise-constant control on the K time cells (cell-centered in time).
struct ControlFunction {
  int u_dim = 1;
  int steps = 0;
  double dt = 0.0;
  Vec values;  // [K][u_dim]

  ControlFunction() = default;
  ControlFunction(const LinearSystem& sys)
      : u_dim(sys.control_dim()), steps(sys.steps), dt(sys.dt()),
        values(static_cast<std::size_t>(sys.control_dim()) * static_cast<std::size_t>(sys.steps), 0.0) {}

  double& at(int k, int c) { return values[static_cast<std::size_t>(k) * u_dim + c]; }
  double at(int k, int c) const { return values[static_cast<std::size_t>(k) * u_dim + c]; }
  double center_time(int k) const { return (k + 0.5) * dt; }
  double l2_norm() const;
};

double control_inner(const ControlFunction& a, const ControlFunction& b);

/// F_T u: terminal state of x' = A x + B u from x(0) = 0.
Eigen::VectorXd input_map(const LinearSystem& sys, const ControlFunction& u);

/// Exact discrete adjoint of input_map: <F_T u, l> = <u, F_T* l>_{L2}.
ControlFunction adjoint_input_map(const LinearSystem& sys, const Eigen::VectorXd& lambda);

/// Controllability Gramian W = F_T F_T*, symmetric PSD.
Eigen::MatrixXd gramian(const LinearSystem& sys);

struct MinEnergyResult {
  ControlFunction u;
  Eigen::VectorXd lambda;
  double value = 0.0;           // 1/2 ||u||^2
  double gramian_lambda_min = 0.0;
  double gramian_cond = 0.0;
  double residual = 0.0;        // ||F_T u - xhat||
};

/// Independent oracle from the KKT system of the discrete problem:
/// W lambda = -xhat, u = -F_T* lambda. Throws when the Gramian is singular
/// below the controllability threshold (lambda_min <= 1e-10).
MinEnergyResult min_energy_oracle(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                  const Eigen::VectorXd& xT);

/// Oracle bundle for min 1/2||u||^2 s.t. F_T u = xT - T_T x0.
ConstrainedProblem assemble_oc_problem(const LinearSystem& sys, const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& xT);

/// Target offset xhat = xT - Phi^K x0.
Eigen::VectorXd oc_target(const LinearSystem& sys, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& xT);

/// The nonsmooth exact-penalty value 1/2||u||^2 + c ||x(T) - xT|| (norm, not
/// squared), for side-by-side threshold experiments.
double eval_exact_penalty_oc(const LinearSystem& sys, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& xT, const ControlFunction& u, double c);

ControlFunction oc_unpack(const LinearSystem& sys, const Vec& x);

}  // namespace exalm
