// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_MATERIALS_HPP
#define PFEM_MATERIALS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfem/mesh.hpp"

namespace pfem
{

// Mass density rho and symmetric positive-definite stiffness tensor T, with the bounds
// rho_min <= rho <= rho_max and T_min I <= T <= T_max I they are declared to satisfy.
struct Material
{
  std::string name;
  std::function<double(const Point2 &)> rho;
  std::function<Eigen::Matrix2d(const Point2 &)> T;
  double rho_min = 1.0, rho_max = 1.0;
  double T_min = 1.0, T_max = 1.0;
};

// Admittance Y(t, x) or impedance Z(t, x) on the boundary.
using BoundaryCoefficient = std::function<double(double t, const Point2 &x)>;

Eigen::Matrix2d invert_T(const Eigen::Matrix2d &T);

Material material_unit();
Material material_aniso_const();
Material material_disk_hetero();

std::vector<std::string> material_names();
Material material_by_name(const std::string &name);

}  // namespace pfem

#endif  // PFEM_MATERIALS_HPP
