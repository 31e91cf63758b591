// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_ANALYSIS_HPP
#define PFEM_ANALYSIS_HPP

#include <string>
#include <vector>

#include "pfem/assembly.hpp"
#include "pfem/scenarios.hpp"
#include "pfem/timestepper.hpp"

namespace pfem
{

// H^d = 1/2 e_q^T M_q e_q + 1/2 e_p^T M_p e_p
double discrete_hamiltonian(const PHSystem &sys, const State &s);
double potential_energy(const PHSystem &sys, const State &s);
double kinetic_energy(const PHSystem &sys, const State &s);

// Interpolates the exact co-energy fields at time t.
State interpolate_state(const PHSystem &sys, const Scenario &sc, double t);

// Error quadrature degree: assembly degree + 2, clamped to the available rules.
int error_quadrature_degree(const PHSystem &sys);

// E^X in co-energy variables: sqrt(int de_q^T T^{-1} de_q + rho de_p^2).
double state_error(const PHSystem &sys, const State &s, const Scenario &sc, double t, int degree = 0);
// The same norm written in energy variables alpha = (T^{-1} e_q, rho e_p).
double state_error_energy_variables(const PHSystem &sys, const State &s, const Scenario &sc, double t,
                                    int degree = 0);
// L2 distance between a scalar finite element field and f.
double scalar_l2_error(const FunctionSpace &space, const Eigen::VectorXd &coeffs, const ScalarField &f,
                       int degree = 12);

// E^H = H(t) - H^d(t), signed.
double hamiltonian_error(const PHSystem &sys, const State &s, const Scenario &sc, double t);

struct ErrorSample
{
  double t = 0.0;
  double EX = 0.0;
  double EH = 0.0;
};

struct LedgerRow
{
  double t = 0.0;
  double H = 0.0;
  double S = 0.0;    // -int v^T M_b y dt: energy leaving through the port
  double Dmp = 0.0;  // int y^T <Y> y dt
  double E = 0.0;    // H + S + Dmp
  double EPot = 0.0;
  double EKin = 0.0;
};

// Midpoint-rule energy bookkeeping: H(t) - H(0) = S_in(t) - Dmp(t), E = H - S_in + Dmp.
class EnergyLedger
{
public:
  void start(double t, double H, double EPot, double EKin);
  void record(const StepInfo &info, double H, double EPot, double EKin);

  const std::vector<LedgerRow> &rows() const { return rows_; }
  double max_drift() const;    // max_t |E(t) - E(0)|
  double max_hamiltonian() const;
  // Largest per-step |H^{n+1} - H^n - dt (supplied - damped)| relative to max(1, |H^n|).
  double max_step_residual() const { return max_step_residual_; }

private:
  std::vector<LedgerRow> rows_;
  double supplied_ = 0.0;
  double damped_ = 0.0;
  double max_step_residual_ = 0.0;
};

struct RateFit
{
  double slope = 0.0;
  bool exact = false;  // some error vanished; the rate is undefined
  int points = 0;

  std::string label() const;
};

// Least-squares slope of log(error) against log(h); needs at least two points.
RateFit fit_slope(const std::vector<double> &h, const std::vector<double> &error);
// Convergence rate over at least three refinement levels.
RateFit convergence_rate(const std::vector<double> &h, const std::vector<double> &error);

}  // namespace pfem

#endif  // PFEM_ANALYSIS_HPP
