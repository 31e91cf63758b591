// SPDX-License-Identifier: Apache-2.0

#include "pfem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"

namespace pfem
{

double potential_energy(const PHSystem &sys, const State &s)
{
  return 0.5 * s.e_q.dot(sys.M_q * s.e_q);
}

double kinetic_energy(const PHSystem &sys, const State &s)
{
  return 0.5 * s.e_p.dot(sys.M_p * s.e_p);
}

double discrete_hamiltonian(const PHSystem &sys, const State &s)
{
  return potential_energy(sys, s) + kinetic_energy(sys, s);
}

State interpolate_state(const PHSystem &sys, const Scenario &sc, double t)
{
  PFEM_THROW_IF(!sc.has_exact_solution(), NotApplicable, "scenario '" + sc.name + "' has no exact solution");
  State s;
  s.e_q = sys.space_q->interpolate([&](const Point2 &x) { return sc.e_q(t, x); });
  s.e_p = sys.space_p->interpolate([&](const Point2 &x) { return sc.e_p(t, x); });
  s.t = t;
  return s;
}

int error_quadrature_degree(const PHSystem &sys)
{
  return std::min(sys.quadrature_degree + 2, kMaxTriangleDegree);
}

namespace
{

// Visits every quadrature point with the discrete co-energy fields.
template <class F>
void for_each_point(const PHSystem &sys, const State &s, int degree, F &&f)
{
  const FunctionSpace &Q = *sys.space_q;
  const FunctionSpace &P = *sys.space_p;
  const Mesh &m = Q.mesh();
  const QuadratureRule r = triangle_rule(degree > 0 ? degree : error_quadrature_degree(sys));
  const ReferenceTable tq = Q.tabulate(r.points);
  const ReferenceTable tp = P.tabulate(r.points);
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellMap map = cell_map(m, c);
    const CellBasis bq = Q.cell_basis(tq, map, c);
    const CellBasis bp = P.cell_basis(tp, map, c);
    const auto &dq = Q.cell_dofs(c);
    const auto &dp = P.cell_dofs(c);
    Eigen::VectorXd cq(static_cast<Eigen::Index>(dq.size())), cp(static_cast<Eigen::Index>(dp.size()));
    for (std::size_t j = 0; j < dq.size(); ++j)
    {
      cq[static_cast<Eigen::Index>(j)] = s.e_q[dq[j]];
    }
    for (std::size_t j = 0; j < dp.size(); ++j)
    {
      cp[static_cast<Eigen::Index>(j)] = s.e_p[dp[j]];
    }
    const Eigen::VectorXd qx = bq.vx * cq, qy = bq.vy * cq, pv = bp.value * cp;
    for (std::size_t q = 0; q < r.size(); ++q)
    {
      const auto qi = static_cast<Eigen::Index>(q);
      f(map.to_physical(r.points[q]), r.weights[q] * std::abs(map.det), Eigen::Vector2d(qx[qi], qy[qi]), pv[qi]);
    }
  }
}

}  // namespace

double scalar_l2_error(const FunctionSpace &space, const Eigen::VectorXd &coeffs, const ScalarField &f, int degree)
{
  PFEM_THROW_IF(space.components() != 1 || space.element().is_vector(), ShapeMismatch,
                "scalar_l2_error needs a scalar space");
  PFEM_THROW_IF(coeffs.size() != space.dim(), ShapeMismatch, "coefficient vector does not match the space");
  const QuadratureRule r = triangle_rule(degree);
  const ReferenceTable table = space.tabulate(r.points);
  const Mesh &mesh = space.mesh();
  double s = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellMap map = cell_map(mesh, c);
    const CellBasis b = space.cell_basis(table, map, c);
    const auto &dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < r.size(); ++q)
    {
      double v = 0.0;
      for (std::size_t j = 0; j < dofs.size(); ++j)
      {
        v += coeffs[dofs[j]] * b.value(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j));
      }
      const double d = v - f(map.to_physical(r.points[q]));
      s += r.weights[q] * std::abs(map.det) * d * d;
    }
  }
  return std::sqrt(s);
}

double state_error(const PHSystem &sys, const State &s, const Scenario &sc, double t, int degree)
{
  PFEM_THROW_IF(!sc.has_exact_solution(), NotApplicable, "scenario '" + sc.name + "' has no exact solution");
  double sum = 0.0;
  for_each_point(sys, s, degree, [&](const Point2 &x, double w, const Eigen::Vector2d &eq, double ep) {
    const Eigen::Vector2d dq = sc.e_q(t, x) - eq;
    const double dp = sc.e_p(t, x) - ep;
    const Eigen::Matrix2d Ti = invert_T(sys.material.T(x));
    sum += w * (dq.dot(Ti * dq) + sys.material.rho(x) * dp * dp);
  });
  return std::sqrt(sum);
}

double state_error_energy_variables(const PHSystem &sys, const State &s, const Scenario &sc, double t,
                                    int degree)
{
  PFEM_THROW_IF(!sc.has_exact_solution(), NotApplicable, "scenario '" + sc.name + "' has no exact solution");
  double sum = 0.0;
  for_each_point(sys, s, degree, [&](const Point2 &x, double w, const Eigen::Vector2d &eq, double ep) {
    const Eigen::Matrix2d T = sys.material.T(x);
    const double rho = sys.material.rho(x);
    const Eigen::Vector2d da = sc.alpha_q(t, x) - invert_T(T) * eq;
    const double dp = sc.alpha_p(t, x) - rho * ep;
    sum += w * (da.dot(T * da) + dp * dp / rho);
  });
  return std::sqrt(sum);
}

double hamiltonian_error(const PHSystem &sys, const State &s, const Scenario &sc, double t)
{
  PFEM_THROW_IF(!sc.exact_H, NotApplicable, "scenario '" + sc.name + "' has no exact Hamiltonian");
  return sc.exact_H(t) - discrete_hamiltonian(sys, s);
}

void EnergyLedger::start(double t, double H, double EPot, double EKin)
{
  rows_.clear();
  supplied_ = damped_ = max_step_residual_ = 0.0;
  rows_.push_back({t, H, 0.0, 0.0, H, EPot, EKin});
}

void EnergyLedger::record(const StepInfo &info, double H, double EPot, double EKin)
{
  PFEM_THROW_IF(rows_.empty(), InvalidArgument, "energy ledger not started");
  const double H_prev = rows_.back().H;
  supplied_ += info.dt * info.supplied;
  damped_ += info.dt * info.damped;
  const double step = H - H_prev - info.dt * (info.supplied - info.damped);
  max_step_residual_ = std::max(max_step_residual_, std::abs(step) / std::max(1.0, std::abs(H_prev)));
  LedgerRow row;
  row.t = info.t0 + info.dt;
  row.H = H;
  row.S = -supplied_;
  row.Dmp = damped_;
  row.E = H + row.S + row.Dmp;
  row.EPot = EPot;
  row.EKin = EKin;
  rows_.push_back(row);
}

double EnergyLedger::max_drift() const
{
  double d = 0.0;
  for (const auto &r : rows_)
  {
    d = std::max(d, std::abs(r.E - rows_.front().E));
  }
  return d;
}

double EnergyLedger::max_hamiltonian() const
{
  double h = 0.0;
  for (const auto &r : rows_)
  {
    h = std::max(h, std::abs(r.H));
  }
  return h;
}

std::string RateFit::label() const
{
  if (exact)
  {
    return "exact";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", slope);
  return buf;
}

RateFit fit_slope(const std::vector<double> &h, const std::vector<double> &error)
{
  PFEM_THROW_IF(h.size() != error.size(), InvalidArgument, "fit_slope: size mismatch");
  PFEM_THROW_IF(h.size() < 2, InvalidArgument, "fit_slope: need at least two points");
  RateFit fit;
  fit.points = static_cast<int>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    PFEM_THROW_IF(!(h[i] > 0.0), InvalidArgument, "fit_slope: mesh sizes must be positive");
    if (!(error[i] > 0.0))
    {
      fit.exact = true;
      fit.slope = std::numeric_limits<double>::quiet_NaN();
      return fit;
    }
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    mx += std::log(h[i]) / n;
    my += std::log(error[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  PFEM_THROW_IF(sxx == 0.0, InvalidArgument, "fit_slope: mesh sizes must differ");
  fit.slope = sxy / sxx;
  return fit;
}

RateFit convergence_rate(const std::vector<double> &h, const std::vector<double> &error)
{
  PFEM_THROW_IF(h.size() < 3, InvalidArgument, "convergence_rate: need at least three refinement levels");
  return fit_slope(h, error);
}

}  // namespace pfem
