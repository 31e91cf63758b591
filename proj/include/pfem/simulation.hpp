// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_SIMULATION_HPP
#define PFEM_SIMULATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "pfem/analysis.hpp"
#include "pfem/assembly.hpp"
#include "pfem/scenarios.hpp"
#include "pfem/timestepper.hpp"

namespace pfem
{

struct Discretization
{
  ElementFamily q{FamilyKind::CG, 1, ValueShape::Vector2};
  ElementFamily p{FamilyKind::CG, 1, ValueShape::Scalar};
  FamilyKind boundary_kind = FamilyKind::DG;
  int boundary_order = 0;

  // "CG_1 x CG_1 x DG_0" (q x p x boundary)
  std::string label() const;
};

struct SimulationSpec
{
  Discretization disc;
  Causality causality = Causality::Neumann;
  int level = 8;
  double dt = 0.0;       // 0: scenario default
  double horizon = 0.0;  // 0: scenario default
  int quadrature_degree = 0;
  StepperOptions stepper;
  int error_samples = 10;
  bool closed = false;  // zero boundary input
};

struct Level
{
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FunctionSpace> q, p;
  std::shared_ptr<const BoundarySpace> boundary;
  std::unique_ptr<PHSystem> system;
};

Level build_level(const Scenario &sc, const Discretization &disc, Causality causality, int level,
                  int quadrature_degree = 0);

// Boundary input coefficients of the scenario for the chosen causality.
InputSampler make_input(const Scenario &sc, const PHSystem &sys, bool closed = false);

struct RunResult
{
  int level = 0;
  double h = 0.0;
  int n_q = 0, n_p = 0, n_b = 0;
  double dt = 0.0;
  int steps = 0;
  std::vector<LedgerRow> energy;
  std::vector<ErrorSample> errors;  // t = 0 first, then the sampled times
  bool has_errors = false;
  double EX_final = 0.0, EX_max = 0.0, EH_final = 0.0;
  double ledger_drift = 0.0;
  double max_hamiltonian = 0.0;
  double max_step_residual = 0.0;
  // (EH(T) - EH(0)) - 1/2 (EX(T)^2 - EX(0)^2), reported only.
  double eh_identity_gap = 0.0;
  std::vector<std::string> warnings;
};

RunResult run_simulation(const Scenario &sc, const SimulationSpec &spec);

struct ConvergenceRow
{
  int level = 0;
  double h = 0.0;
  int n_q = 0, n_p = 0, n_b = 0;
  double EX_final = 0.0, EX_max = 0.0, EH_final = 0.0;
  double slope_so_far = 0.0;  // EX_final slope over the levels up to this row; NaN for the first
};

struct ConvergenceReport
{
  std::string scenario;
  SimulationSpec spec;
  std::vector<ConvergenceRow> rows;
  std::vector<int> fit_levels;
  RateFit ex_rate, ex_max_rate, eh_rate;
  std::vector<std::string> warnings;
};

// Runs every level (up to `workers` at a time) and fits the rates on the finest
// `fit_points` levels.
ConvergenceReport run_convergence(const Scenario &sc, const SimulationSpec &spec, std::vector<int> levels,
                                  int workers = 1, int fit_points = 3);

// CSV writers: comma separated, header row, 17 significant digits.
std::string format_double(double v);
void write_convergence_csv(std::ostream &os, const ConvergenceReport &r);
void write_energy_csv(std::ostream &os, const std::vector<LedgerRow> &rows);
void write_errors_csv(std::ostream &os, const std::vector<ErrorSample> &samples);

}  // namespace pfem

#endif  // PFEM_SIMULATION_HPP
