// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_TIMESTEPPER_HPP
#define PFEM_TIMESTEPPER_HPP

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "pfem/assembly.hpp"

namespace pfem
{

struct State
{
  Eigen::VectorXd e_q;
  Eigen::VectorXd e_p;
  double t = 0.0;

  Eigen::VectorXd stacked() const;
  static State from_stacked(const Eigen::VectorXd &E, int n_q, double t);
};

State zero_state(const PHSystem &sys, double t = 0.0);

// Boundary input coefficients (length N_b) at time t.
using InputSampler = std::function<Eigen::VectorXd(double t)>;

enum class InputRule
{
  Midpoint,     // u(t + dt/2); exact discrete power balance
  Trapezoidal,  // (u(t) + u(t + dt)) / 2, classical Crank-Nicolson
};

enum class SolverBackend
{
  SparseLU,
  DenseLU,
};

std::string to_string(InputRule r);
InputRule parse_input_rule(const std::string &text);
std::string to_string(SolverBackend b);
SolverBackend parse_solver_backend(const std::string &text);

struct StepperOptions
{
  InputRule input_rule = InputRule::Midpoint;
  SolverBackend backend = SolverBackend::SparseLU;
  double residual_tolerance = 1e-11;
};

// Quantities of the last step needed by the energy ledger. Midpoint values are taken at
// t + dt/2 independently of the input rule.
struct StepInfo
{
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::VectorXd y_mid;     // M_b y = G^T (E^n + E^{n+1}) / 2
  Eigen::VectorXd v_mid;     // external input at t + dt/2
  double supplied = 0.0;     // y_mid^T M_b v_mid
  double damped = 0.0;       // y_mid^T <Y(t + dt/2)> y_mid
  double residual = 0.0;     // relative residual of the linear solve
  bool refactorized = false;
};

//
// Implicit midpoint / Crank-Nicolson integrator for
//   M dE/dt = (J - R(t)) E + G v,   u = v - M_b^{-1} <Y(t)> y,
// where R(t) = G M_b^{-1} <Y(t)> M_b^{-1} G^T is present only when an admittance is given.
//
class TimeStepper
{
public:
  TimeStepper(const PHSystem &sys, double dt, StepperOptions options = {},
              BoundaryCoefficient admittance = {});
  ~TimeStepper();
  TimeStepper(const TimeStepper &) = delete;
  TimeStepper &operator=(const TimeStepper &) = delete;

  double dt() const { return dt_; }
  // Changes the step and refactorizes.
  void set_dt(double dt);
  const StepperOptions &options() const { return options_; }
  bool damped() const { return static_cast<bool>(admittance_); }

  State step(const State &s, const InputSampler &v);
  const StepInfo &last() const { return info_; }

  Eigen::VectorXd output(const State &s) const;
  Eigen::VectorXd output(const Eigen::VectorXd &E) const;

  // The feedback operator R at time t (N_state x N_state).
  SparseMatrix feedback(double t) const;

private:
  struct Factorization;

  void build_operators();
  // p- or q-rows touched by the input operator, and the compressed input block.
  void build_compact_input();
  Eigen::MatrixXd compact_feedback(double t, bool *nonzero) const;
  SparseMatrix embed(const Eigen::MatrixXd &Rc, double scale) const;
  Eigen::VectorXd solve(const Factorization &f, const SparseMatrix &A, const Eigen::VectorXd &rhs,
                        double *residual) const;

  const PHSystem &sys_;
  double dt_;
  StepperOptions options_;
  BoundaryCoefficient admittance_;

  SparseMatrix M_, J_, G_;
  SparseMatrix A_minus_, A_plus_;  // M -/+ dt/2 J
  std::unique_ptr<Factorization> base_;
  std::unique_ptr<Factorization> work_;
  bool work_analyzed_ = false;

  Eigen::SimplicialLDLT<SparseMatrix> boundary_mass_;
  std::vector<int> touched_;     // state indices with nonzero rows in G
  Eigen::MatrixXd G_compact_;    // touched x N_b
  Eigen::MatrixXd Mb_inverse_;   // dense M_b^{-1}, admittance path only

  StepInfo info_;
};

}  // namespace pfem

#endif  // PFEM_TIMESTEPPER_HPP
