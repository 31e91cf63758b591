// SPDX-License-Identifier: Apache-2.0

#include "pfem/timestepper.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "pfem/error.hpp"

namespace pfem
{

Eigen::VectorXd State::stacked() const
{
  Eigen::VectorXd E(e_q.size() + e_p.size());
  E << e_q, e_p;
  return E;
}

State State::from_stacked(const Eigen::VectorXd &E, int n_q, double t)
{
  State s;
  s.e_q = E.head(n_q);
  s.e_p = E.tail(E.size() - n_q);
  s.t = t;
  return s;
}

State zero_state(const PHSystem &sys, double t)
{
  State s;
  s.e_q = Eigen::VectorXd::Zero(sys.n_q());
  s.e_p = Eigen::VectorXd::Zero(sys.n_p());
  s.t = t;
  return s;
}

namespace
{

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string to_string(InputRule r)
{
  return r == InputRule::Midpoint ? "midpoint" : "trapezoidal";
}

InputRule parse_input_rule(const std::string &text)
{
  const std::string s = lower(text);
  if (s == "midpoint")
  {
    return InputRule::Midpoint;
  }
  if (s == "trapezoidal" || s == "cn" || s == "crank-nicolson")
  {
    return InputRule::Trapezoidal;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown input rule '" + text + "' (midpoint, trapezoidal)");
}

std::string to_string(SolverBackend b)
{
  return b == SolverBackend::SparseLU ? "sparse-lu" : "dense-lu";
}

SolverBackend parse_solver_backend(const std::string &text)
{
  const std::string s = lower(text);
  if (s == "sparse-lu" || s == "sparse")
  {
    return SolverBackend::SparseLU;
  }
  if (s == "dense-lu" || s == "dense")
  {
    return SolverBackend::DenseLU;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown solver '" + text + "' (sparse-lu, dense-lu)");
}

struct TimeStepper::Factorization
{
  SolverBackend backend;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> sparse;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense;
  Eigen::Index pattern_nnz = -1;

  void factorize(const SparseMatrix &A, bool reuse_pattern)
  {
    if (backend == SolverBackend::DenseLU)
    {
      dense.compute(Eigen::MatrixXd(A));
      const double rc = dense.rcond();
      PFEM_THROW_IF(!(rc > 1e-15), SolverFailure, "stepping operator is singular (rcond " + std::to_string(rc) + ")");
      return;
    }
    if (!reuse_pattern || pattern_nnz != A.nonZeros())
    {
      sparse.analyzePattern(A);
      pattern_nnz = A.nonZeros();
    }
    sparse.factorize(A);
    PFEM_THROW_IF(sparse.info() != Eigen::Success, SolverFailure,
                  "stepping operator factorization failed: " + sparse.lastErrorMessage());
  }

  Eigen::VectorXd solve(const Eigen::VectorXd &b) const
  {
    if (backend == SolverBackend::DenseLU)
    {
      return dense.solve(b);
    }
    return sparse.solve(b);
  }
};

TimeStepper::TimeStepper(const PHSystem &sys, double dt, StepperOptions options, BoundaryCoefficient admittance)
  : sys_(sys), dt_(dt), options_(options), admittance_(std::move(admittance))
{
  PFEM_THROW_IF(!(dt > 0.0) || !std::isfinite(dt), InvalidArgument, "time step must be positive");
  M_ = sys_.mass();
  J_ = sys_.structure();
  G_ = sys_.input_operator();
  boundary_mass_.compute(sys_.M_b);
  PFEM_THROW_IF(boundary_mass_.info() != Eigen::Success, SolverFailure, "boundary mass matrix is not SPD");
  if (admittance_)
  {
    build_compact_input();
  }
  base_ = std::make_unique<Factorization>();
  base_->backend = options_.backend;
  work_ = std::make_unique<Factorization>();
  work_->backend = options_.backend;
  build_operators();
}

TimeStepper::~TimeStepper() = default;

void TimeStepper::set_dt(double dt)
{
  PFEM_THROW_IF(!(dt > 0.0) || !std::isfinite(dt), InvalidArgument, "time step must be positive");
  if (dt == dt_)
  {
    return;
  }
  dt_ = dt;
  build_operators();
}

void TimeStepper::build_operators()
{
  A_minus_ = M_ - (0.5 * dt_) * J_;
  A_plus_ = M_ + (0.5 * dt_) * J_;
  A_minus_.makeCompressed();
  A_plus_.makeCompressed();
  base_->factorize(A_minus_, false);
  work_->pattern_nnz = -1;
}

void TimeStepper::build_compact_input()
{
  std::vector<char> hit(static_cast<std::size_t>(G_.rows()), 0);
  for (int k = 0; k < G_.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(G_, k); it; ++it)
    {
      if (it.value() != 0.0)
      {
        hit[static_cast<std::size_t>(it.row())] = 1;
      }
    }
  }
  std::vector<int> pos(hit.size(), -1);
  for (std::size_t i = 0; i < hit.size(); ++i)
  {
    if (hit[i])
    {
      pos[i] = static_cast<int>(touched_.size());
      touched_.push_back(static_cast<int>(i));
    }
  }
  G_compact_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(touched_.size()), G_.cols());
  for (int k = 0; k < G_.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(G_, k); it; ++it)
    {
      const int p = pos[static_cast<std::size_t>(it.row())];
      if (p >= 0)
      {
        G_compact_(p, it.col()) = it.value();
      }
    }
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(sys_.n_b(), sys_.n_b());
  Mb_inverse_ = boundary_mass_.solve(I);
}

Eigen::MatrixXd TimeStepper::compact_feedback(double t, bool *nonzero) const
{
  const Eigen::MatrixXd Y(assemble_admittance(*sys_.boundary, admittance_, t));
  *nonzero = Y.cwiseAbs().maxCoeff() > 0.0;
  if (!*nonzero)
  {
    return {};
  }
  const Eigen::MatrixXd W = G_compact_ * Mb_inverse_;
  return W * Y * W.transpose();
}

SparseMatrix TimeStepper::embed(const Eigen::MatrixXd &Rc, double scale) const
{
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(touched_.size() * touched_.size());
  for (std::size_t j = 0; j < touched_.size(); ++j)
  {
    for (std::size_t i = 0; i < touched_.size(); ++i)
    {
      const double v = Rc.size() ? scale * Rc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
      t.emplace_back(touched_[i], touched_[j], v);
    }
  }
  SparseMatrix R(sys_.n_state(), sys_.n_state());
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

SparseMatrix TimeStepper::feedback(double t) const
{
  if (!admittance_)
  {
    return SparseMatrix(sys_.n_state(), sys_.n_state());
  }
  bool nz = false;
  const Eigen::MatrixXd Rc = compact_feedback(t, &nz);
  return embed(nz ? Rc : Eigen::MatrixXd(), 1.0);
}

Eigen::VectorXd TimeStepper::solve(const Factorization &f, const SparseMatrix &A, const Eigen::VectorXd &rhs,
                                   double *residual) const
{
  const double scale = rhs.norm();
  if (scale == 0.0)
  {
    *residual = 0.0;
    return Eigen::VectorXd::Zero(rhs.size());
  }
  Eigen::VectorXd x = f.solve(rhs);
  Eigen::VectorXd r = rhs - A * x;
  *residual = r.norm() / scale;
  if (*residual > options_.residual_tolerance)
  {
    x += f.solve(r);
    r = rhs - A * x;
    *residual = r.norm() / scale;
  }
  PFEM_THROW_IF(!std::isfinite(*residual) || *residual > options_.residual_tolerance, SolverFailure,
                "linear solve residual " + std::to_string(*residual) + " exceeds tolerance");
  return x;
}

State TimeStepper::step(const State &s, const InputSampler &v)
{
  PFEM_THROW_IF(s.e_q.size() != sys_.n_q() || s.e_p.size() != sys_.n_p(), ShapeMismatch,
                "state does not match the system dimensions");
  const double t0 = s.t;
  const double tm = t0 + 0.5 * dt_;
  const Eigen::VectorXd E = s.stacked();

  info_ = StepInfo{};
  info_.t0 = t0;
  info_.dt = dt_;
  info_.v_mid = v ? v(tm) : Eigen::VectorXd::Zero(sys_.n_b());
  PFEM_THROW_IF(info_.v_mid.size() != sys_.n_b(), ShapeMismatch, "input has wrong length");
  Eigen::VectorXd u_in = info_.v_mid;
  if (options_.input_rule == InputRule::Trapezoidal)
  {
    u_in = v ? Eigen::VectorXd(0.5 * (v(t0) + v(t0 + dt_))) : Eigen::VectorXd::Zero(sys_.n_b());
  }

  Eigen::VectorXd rhs = A_plus_ * E + dt_ * (G_ * u_in);
  Eigen::VectorXd E_new;

  bool use_base = true;
  SparseMatrix A;
  if (admittance_)
  {
    bool nz_new = false, nz_old = false;
    Eigen::MatrixXd R_new, R_old;
    if (options_.input_rule == InputRule::Midpoint)
    {
      R_new = compact_feedback(tm, &nz_new);
      R_old = R_new;
      nz_old = nz_new;
    }
    else
    {
      R_new = compact_feedback(t0 + dt_, &nz_new);
      R_old = compact_feedback(t0, &nz_old);
    }
    if (nz_old)
    {
      rhs -= embed(R_old, 0.5 * dt_) * E;
    }
    if (nz_new)
    {
      use_base = false;
      A = A_minus_ + embed(R_new, 0.5 * dt_);
      work_->factorize(A, true);
      info_.refactorized = true;
    }
  }
  if (use_base)
  {
    E_new = solve(*base_, A_minus_, rhs, &info_.residual);
  }
  else
  {
    E_new = solve(*work_, A, rhs, &info_.residual);
  }

  info_.y_mid = output(Eigen::VectorXd(0.5 * (E + E_new)));
  info_.supplied = info_.y_mid.dot(sys_.M_b * info_.v_mid);
  if (admittance_)
  {
    const SparseMatrix Y = assemble_admittance(*sys_.boundary, admittance_, tm);
    info_.damped = info_.y_mid.dot(Y * info_.y_mid);
  }
  return State::from_stacked(E_new, sys_.n_q(), t0 + dt_);
}

Eigen::VectorXd TimeStepper::output(const Eigen::VectorXd &E) const
{
  PFEM_THROW_IF(E.size() != sys_.n_state(), ShapeMismatch, "state does not match the system dimensions");
  const Eigen::VectorXd g = G_.transpose() * E;
  return boundary_mass_.solve(g);
}

Eigen::VectorXd TimeStepper::output(const State &s) const
{
  return output(s.stacked());
}

}  // namespace pfem
