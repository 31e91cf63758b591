// SPDX-License-Identifier: Apache-2.0

#include "pfem/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "pfem/elements.hpp"
#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"

namespace pfem
{

namespace
{

const double kSqrt2 = std::numbers::sqrt2;

TimeBoundaryField normal_stress(const Scenario &s)
{
  auto aq = s.alpha_q;
  auto T = s.material.T;
  return [aq, T](double t, const Point2 &x, const Point2 &n) { return (T(x) * aq(t, x)).dot(n); };
}

TimeBoundaryField boundary_velocity(const Scenario &s)
{
  auto ap = s.alpha_p;
  auto rho = s.material.rho;
  return [ap, rho](double t, const Point2 &x, const Point2 &) { return ap(t, x) / rho(x); };
}

void attach_traces(Scenario &s)
{
  s.control = normal_stress(s);
  s.dirichlet_control = boundary_velocity(s);
}

// Hamiltonian by quadrature on a fixed fine mesh of the same domain.
void attach_quadrature_H(Scenario &s, Mesh mesh)
{
  auto m = std::make_shared<const Mesh>(std::move(mesh));
  Scenario copy = s;
  s.exact_H = [copy, m](double t) { return quadrature_hamiltonian(copy, *m, t); };
}

}  // namespace

Eigen::Vector2d Scenario::e_q(double t, const Point2 &x) const
{
  PFEM_THROW_IF(!alpha_q, NotApplicable, "scenario '" + name + "' has no exact solution");
  return material.T(x) * alpha_q(t, x);
}

double Scenario::e_p(double t, const Point2 &x) const
{
  PFEM_THROW_IF(!alpha_p, NotApplicable, "scenario '" + name + "' has no exact solution");
  return alpha_p(t, x) / material.rho(x);
}

double square_f(double t)
{
  return 2.0 * std::sin(kSqrt2 * t) + 3.0 * std::cos(kSqrt2 * t);
}

double square_df(double t)
{
  return kSqrt2 * (2.0 * std::cos(kSqrt2 * t) - 3.0 * std::sin(kSqrt2 * t));
}

double square_exact_H(double t)
{
  const double sc = std::sin(1.0) * std::cos(1.0);
  const double f = square_f(t), df = square_df(t);
  return df * df * (1.0 - sc * sc) / 8.0 + f * f * ((1.0 + sc) * (1.0 + sc) + (1.0 - sc) * (1.0 - sc)) / 8.0;
}

double square_control(double t, const Point2 &x)
{
  const double f = square_f(t);
  const double tol = 1e-12;
  if (std::abs(x.y()) < tol)
  {
    return -f * std::cos(x.x());
  }
  if (std::abs(x.x() - 1.0) < tol)
  {
    return -f * std::sin(1.0) * std::sin(x.y());
  }
  if (std::abs(x.y() - 1.0) < tol)
  {
    return f * std::cos(x.x()) * std::cos(1.0);
  }
  if (std::abs(x.x()) < tol)
  {
    return 0.0;
  }
  throw Error(ErrorKind::InvalidArgument, "square_control: point is not on the boundary");
}

double quadrature_hamiltonian(const Scenario &s, const Mesh &mesh, double t, int degree)
{
  PFEM_THROW_IF(!s.has_exact_solution(), NotApplicable, "scenario '" + s.name + "' has no exact solution");
  const QuadratureRule r = triangle_rule(degree);
  double H = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const CellMap map = cell_map(mesh, c);
    for (std::size_t q = 0; q < r.size(); ++q)
    {
      const Point2 x = map.to_physical(r.points[q]);
      const Eigen::Vector2d aq = s.alpha_q(t, x);
      const double ap = s.alpha_p(t, x);
      H += r.weights[q] * std::abs(map.det) * 0.5 * (aq.dot(s.material.T(x) * aq) + ap * ap / s.material.rho(x));
    }
  }
  return H;
}

Scenario scenario_square()
{
  Scenario s;
  s.name = "square";
  s.description = "unit square, rho = 1, T = I, manufactured solution";
  s.build_mesh = [](int n) { return build_unit_square(n); };
  s.default_levels = {4, 8, 16, 32};
  s.material = material_unit();
  s.alpha_q = [](double t, const Point2 &x) {
    return Eigen::Vector2d(square_f(t) * Eigen::Vector2d(-std::sin(x.x()) * std::sin(x.y()),
                                                         std::cos(x.x()) * std::cos(x.y())));
  };
  s.alpha_p = [](double t, const Point2 &x) { return square_df(t) * std::cos(x.x()) * std::sin(x.y()); };
  attach_traces(s);
  s.exact_H = square_exact_H;
  s.horizon = 0.5;
  s.dt = 1e-3;
  return s;
}

Scenario scenario_lshape()
{
  Scenario s = scenario_square();
  s.name = "lshape";
  s.description = "L-shaped domain, square solution restricted";
  s.build_mesh = [](int n) { return build_lshape(n); };
  s.default_levels = {4, 8, 16, 32};
  attach_traces(s);
  attach_quadrature_H(s, build_lshape(16));
  return s;
}

Scenario scenario_aniso()
{
  Scenario s;
  s.name = "aniso";
  s.description = "unit square, constant anisotropic T = [[5,2],[2,3]], plane wave";
  s.build_mesh = [](int n) { return build_unit_square(n); };
  s.default_levels = {4, 8, 16, 32};
  s.material = material_aniso_const();
  s.alpha_q = [](double t, const Point2 &x) {
    return Eigen::Vector2d(Eigen::Vector2d(-1.0, 2.0) * std::sin(3.0 * t - x.x() + 2.0 * x.y()));
  };
  s.alpha_p = [](double t, const Point2 &x) { return 3.0 * std::sin(3.0 * t - x.x() + 2.0 * x.y()); };
  attach_traces(s);
  attach_quadrature_H(s, build_unit_square(16));
  s.horizon = 0.5;
  s.dt = 1e-3;
  return s;
}

Scenario scenario_damped_disk()
{
  Scenario s;
  s.name = "damped-disk";
  s.description = "unit disk, heterogeneous anisotropic material, boundary control then admittance damping";
  s.build_mesh = [](int n) { return build_disk(n); };
  s.default_levels = {5};
  s.material = material_disk_hetero();
  s.control = [](double t, const Point2 &x, const Point2 &) {
    return t < 1.0 ? 5.0 * x.x() * std::sin(t) * std::sin(1.0 - t) : 0.0;
  };
  s.admittance = [](double t, const Point2 &x) {
    return t > 1.5 ? 2.5 * x.x() * std::sin(t) * std::sin((t - 1.5) / 1.5) : 0.0;
  };
  s.horizon = 3.0;
  s.dt = 1e-3;
  return s;
}

std::vector<std::string> scenario_names()
{
  return {"square", "lshape", "aniso", "damped-disk"};
}

Scenario scenario_by_name(const std::string &name)
{
  if (name == "square")
  {
    return scenario_square();
  }
  if (name == "lshape")
  {
    return scenario_lshape();
  }
  if (name == "aniso")
  {
    return scenario_aniso();
  }
  if (name == "damped-disk")
  {
    return scenario_damped_disk();
  }
  std::string list;
  for (const auto &n : scenario_names())
  {
    list += (list.empty() ? "" : ", ") + n;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + name + "'; available: " + list);
}

}  // namespace pfem
