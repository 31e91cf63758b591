// SPDX-License-Identifier: Apache-2.0

#include "pfem/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>

#include "pfem/error.hpp"

namespace pfem
{

std::string Discretization::label() const
{
  return q.name() + " x " + p.name() + " x " + ElementFamily{boundary_kind, boundary_order}.name();
}

Level build_level(const Scenario &sc, const Discretization &disc, Causality causality, int level,
                  int quadrature_degree)
{
  PFEM_THROW_IF(!sc.build_mesh, InvalidArgument, "scenario has no mesh builder");
  Level L;
  L.mesh = std::make_shared<const Mesh>(sc.build_mesh(level));
  ElementFamily q = disc.q;
  q.shape = ValueShape::Vector2;
  ElementFamily p = disc.p;
  p.shape = ValueShape::Scalar;
  PFEM_THROW_IF(p.is_hdiv(), InvalidCombination, "p-space must be scalar (CG or DG), got " + p.name());
  L.q = std::make_shared<const FunctionSpace>(L.mesh, q);
  L.p = std::make_shared<const FunctionSpace>(L.mesh, p);
  L.boundary = std::make_shared<const BoundarySpace>(L.mesh, disc.boundary_kind, disc.boundary_order);
  L.system = std::make_unique<PHSystem>(
      assemble_system(L.q, L.p, L.boundary, sc.material, causality, quadrature_degree));
  return L;
}

InputSampler make_input(const Scenario &sc, const PHSystem &sys, bool closed)
{
  const auto boundary = sys.boundary;
  const TimeBoundaryField field = sys.causality == Causality::Neumann ? sc.control : sc.dirichlet_control;
  if (closed || !field)
  {
    const int n = sys.n_b();
    return [n](double) { return Eigen::VectorXd(Eigen::VectorXd::Zero(n)); };
  }
  return [boundary, field](double t) {
    return boundary->interpolate([&](const Point2 &x, const Point2 &n) { return field(t, x, n); });
  };
}

RunResult run_simulation(const Scenario &sc, const SimulationSpec &spec)
{
  const double dt = spec.dt > 0.0 ? spec.dt : sc.dt;
  const double horizon = spec.horizon > 0.0 ? spec.horizon : sc.horizon;
  PFEM_THROW_IF(!(dt > 0.0), InvalidArgument, "dt must be positive");
  const long long steps = std::llround(horizon / dt);
  PFEM_THROW_IF(steps < 1 || std::abs(static_cast<double>(steps) * dt - horizon) > 1e-9 * horizon,
                InvalidArgument, "horizon must be a positive multiple of dt");

  Level L = build_level(sc, spec.disc, spec.causality, spec.level, spec.quadrature_degree);
  const PHSystem &sys = *L.system;

  RunResult out;
  out.level = spec.level;
  out.h = L.mesh->h;
  out.n_q = sys.n_q();
  out.n_p = sys.n_p();
  out.n_b = sys.n_b();
  out.dt = dt;
  out.steps = static_cast<int>(steps);
  out.warnings = sys.warnings;

  const bool exact = sc.has_exact_solution() && !spec.closed;
  State s = sc.has_exact_solution() ? interpolate_state(sys, sc, 0.0) : zero_state(sys, 0.0);
  TimeStepper stepper(sys, dt, spec.stepper, spec.closed ? BoundaryCoefficient{} : sc.admittance);
  const InputSampler u = make_input(sc, sys, spec.closed);

  EnergyLedger ledger;
  ledger.start(0.0, discrete_hamiltonian(sys, s), potential_energy(sys, s), kinetic_energy(sys, s));

  std::vector<long long> sample_steps;
  const int samples = std::max(1, spec.error_samples);
  for (int i = 1; i <= samples; ++i)
  {
    sample_steps.push_back(std::llround(static_cast<double>(i) * static_cast<double>(steps) / samples));
  }
  auto sample = [&](const State &st) {
    ErrorSample e;
    e.t = st.t;
    e.EX = state_error(sys, st, sc, st.t);
    e.EH = sc.exact_H ? hamiltonian_error(sys, st, sc, st.t) : std::numeric_limits<double>::quiet_NaN();
    out.errors.push_back(e);
  };
  if (exact)
  {
    sample(s);
  }

  std::size_t next = 0;
  for (long long n = 1; n <= steps; ++n)
  {
    s = stepper.step(s, u);
    s.t = static_cast<double>(n) * dt;
    ledger.record(stepper.last(), discrete_hamiltonian(sys, s), potential_energy(sys, s), kinetic_energy(sys, s));
    while (next < sample_steps.size() && sample_steps[next] == n)
    {
      if (exact)
      {
        sample(s);
      }
      ++next;
    }
  }

  out.energy = ledger.rows();
  out.ledger_drift = ledger.max_drift();
  out.max_hamiltonian = ledger.max_hamiltonian();
  out.max_step_residual = ledger.max_step_residual();
  if (exact)
  {
    out.has_errors = true;
    out.EX_final = out.errors.back().EX;
    out.EH_final = out.errors.back().EH;
    for (std::size_t i = 1; i < out.errors.size(); ++i)
    {
      out.EX_max = std::max(out.EX_max, out.errors[i].EX);
    }
    const ErrorSample &e0 = out.errors.front();
    const ErrorSample &e1 = out.errors.back();
    out.eh_identity_gap = (e1.EH - e0.EH) - 0.5 * (e1.EX * e1.EX - e0.EX * e0.EX);
  }
  return out;
}

ConvergenceReport run_convergence(const Scenario &sc, const SimulationSpec &spec, std::vector<int> levels,
                                  int workers, int fit_points)
{
  PFEM_THROW_IF(levels.size() < 3, InvalidArgument, "a convergence sweep needs at least three mesh levels");
  PFEM_THROW_IF(!sc.has_exact_solution(), NotApplicable,
                "scenario '" + sc.name + "' has no exact solution to measure errors against");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  PFEM_THROW_IF(levels.size() < 3, InvalidArgument, "a convergence sweep needs at least three distinct levels");

  workers = std::max(1, workers);
  std::vector<RunResult> results(levels.size());
  for (std::size_t start = 0; start < levels.size(); start += static_cast<std::size_t>(workers))
  {
    std::vector<std::future<RunResult>> batch;
    const std::size_t end = std::min(levels.size(), start + static_cast<std::size_t>(workers));
    for (std::size_t i = start; i < end; ++i)
    {
      SimulationSpec s = spec;
      s.level = levels[i];
      if (workers == 1)
      {
        results[i] = run_simulation(sc, s);
      }
      else
      {
        batch.push_back(std::async(std::launch::async, [&sc, s] { return run_simulation(sc, s); }));
      }
    }
    for (std::size_t i = start; i < end && workers > 1; ++i)
    {
      results[i] = batch[i - start].get();
    }
  }

  ConvergenceReport rep;
  rep.scenario = sc.name;
  rep.spec = spec;
  std::vector<double> hs, ex, exm, eh;
  for (const RunResult &r : results)
  {
    ConvergenceRow row;
    row.level = r.level;
    row.h = r.h;
    row.n_q = r.n_q;
    row.n_p = r.n_p;
    row.n_b = r.n_b;
    row.EX_final = r.EX_final;
    row.EX_max = r.EX_max;
    row.EH_final = r.EH_final;
    hs.push_back(r.h);
    ex.push_back(r.EX_final);
    exm.push_back(r.EX_max);
    eh.push_back(std::abs(r.EH_final));
    if (hs.size() < 2)
    {
      row.slope_so_far = std::numeric_limits<double>::quiet_NaN();
    }
    else
    {
      const RateFit f = fit_slope(hs, ex);
      row.slope_so_far = f.slope;
    }
    rep.rows.push_back(row);
    for (const auto &w : r.warnings)
    {
      if (std::find(rep.warnings.begin(), rep.warnings.end(), w) == rep.warnings.end())
      {
        rep.warnings.push_back(w);
      }
    }
  }
  const std::size_t k = std::min(levels.size(), static_cast<std::size_t>(std::max(3, fit_points)));
  const std::size_t first = levels.size() - k;
  auto tail = [first](const std::vector<double> &v) { return std::vector<double>(v.begin() + static_cast<long>(first), v.end()); };
  rep.fit_levels.assign(levels.begin() + static_cast<long>(first), levels.end());
  rep.ex_rate = convergence_rate(tail(hs), tail(ex));
  rep.ex_max_rate = convergence_rate(tail(hs), tail(exm));
  rep.eh_rate = sc.exact_H ? convergence_rate(tail(hs), tail(eh)) : RateFit{};
  return rep;
}

std::string format_double(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_convergence_csv(std::ostream &os, const ConvergenceReport &r)
{
  os << "h,N_q,N_p,N_boundary,EX_final,EX_max,EH_final,slope_so_far\n";
  for (const auto &row : r.rows)
  {
    os << format_double(row.h) << ',' << row.n_q << ',' << row.n_p << ',' << row.n_b << ','
       << format_double(row.EX_final) << ',' << format_double(row.EX_max) << ',' << format_double(row.EH_final)
       << ',' << format_double(row.slope_so_far) << '\n';
  }
}

void write_energy_csv(std::ostream &os, const std::vector<LedgerRow> &rows)
{
  os << "t,H,S,Dmp,E,EPot,EKin\n";
  for (const auto &r : rows)
  {
    os << format_double(r.t) << ',' << format_double(r.H) << ',' << format_double(r.S) << ','
       << format_double(r.Dmp) << ',' << format_double(r.E) << ',' << format_double(r.EPot) << ','
       << format_double(r.EKin) << '\n';
  }
}

void write_errors_csv(std::ostream &os, const std::vector<ErrorSample> &samples)
{
  os << "t,EX,EH\n";
  for (const auto &s : samples)
  {
    os << format_double(s.t) << ',' << format_double(s.EX) << ',' << format_double(s.EH) << '\n';
  }
}

}  // namespace pfem
