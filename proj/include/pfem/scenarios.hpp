// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_SCENARIOS_HPP
#define PFEM_SCENARIOS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pfem/assembly.hpp"
#include "pfem/materials.hpp"
#include "pfem/mesh.hpp"

namespace pfem
{

using TimeScalarField = std::function<double(double t, const Point2 &x)>;
using TimeVectorField = std::function<Eigen::Vector2d(double t, const Point2 &x)>;
// Boundary data u(t, x) sampled on an edge with outward unit normal n.
using TimeBoundaryField = std::function<double(double t, const Point2 &x, const Point2 &n)>;

struct Scenario
{
  std::string name;
  std::string description;
  std::function<Mesh(int level)> build_mesh;
  std::vector<int> default_levels;
  Material material;
  Causality causality = Causality::Neumann;

  // Energy variables (strain, linear momentum); empty when no exact solution is known.
  TimeVectorField alpha_q;
  TimeScalarField alpha_p;

  // Neumann input: normal stress (T alpha_q) . n. Dirichlet input: velocity alpha_p / rho.
  TimeBoundaryField control;
  TimeBoundaryField dirichlet_control;

  std::function<double(double t)> exact_H;  // empty when unavailable
  BoundaryCoefficient admittance;           // empty for undamped scenarios

  double horizon = 0.5;
  double dt = 1e-3;

  bool has_exact_solution() const { return static_cast<bool>(alpha_q) && static_cast<bool>(alpha_p); }

  // Co-energy fields e_q = T alpha_q, e_p = alpha_p / rho.
  Eigen::Vector2d e_q(double t, const Point2 &x) const;
  double e_p(double t, const Point2 &x) const;
};

// f(t) = 2 sin(sqrt2 t) + 3 cos(sqrt2 t) drives the square and L-shape solutions.
double square_f(double t);
double square_df(double t);
// Closed-form Hamiltonian of the square solution.
double square_exact_H(double t);
// Piecewise control of the square written out side by side.
double square_control(double t, const Point2 &x);

// H(t) = 1/2 int alpha_q^T T alpha_q + alpha_p^2 / rho, integrated cellwise on `mesh`.
double quadrature_hamiltonian(const Scenario &s, const Mesh &mesh, double t, int degree = 12);

Scenario scenario_square();
Scenario scenario_lshape();
Scenario scenario_aniso();
Scenario scenario_damped_disk();

std::vector<std::string> scenario_names();
// Throws InvalidArgument listing the available names.
Scenario scenario_by_name(const std::string &name);

}  // namespace pfem

#endif  // PFEM_SCENARIOS_HPP
