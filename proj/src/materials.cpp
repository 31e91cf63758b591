// SPDX-License-Identifier: Apache-2.0

#include "pfem/materials.hpp"

#include <cmath>

#include "pfem/error.hpp"

namespace pfem
{

Eigen::Matrix2d invert_T(const Eigen::Matrix2d &T)
{
  const double scale = T.cwiseAbs().maxCoeff();
  PFEM_THROW_IF(!T.allFinite(), MaterialError, "invert_T: non-finite tensor");
  PFEM_THROW_IF(std::abs(T(0, 1) - T(1, 0)) > 1e-14 * scale, MaterialError,
                "invert_T: tensor is not symmetric");
  const double det = T(0, 0) * T(1, 1) - T(0, 1) * T(1, 0);
  PFEM_THROW_IF(!(det > 0.0) || !(T(0, 0) > 0.0), MaterialError,
                "invert_T: tensor is singular or indefinite");
  Eigen::Matrix2d inv;
  inv << T(1, 1), -T(0, 1), -T(1, 0), T(0, 0);
  return inv / det;
}

Material material_unit()
{
  Material m;
  m.name = "unit";
  m.rho = [](const Point2 &) { return 1.0; };
  m.T = [](const Point2 &) { return Eigen::Matrix2d::Identity().eval(); };
  return m;
}

Material material_aniso_const()
{
  Material m;
  m.name = "aniso-const";
  m.rho = [](const Point2 &) { return 1.0; };
  m.T = [](const Point2 &)
  {
    Eigen::Matrix2d T;
    T << 5.0, 2.0, 2.0, 3.0;
    return T;
  };
  m.T_min = 4.0 - std::sqrt(5.0);
  m.T_max = 4.0 + std::sqrt(5.0);
  return m;
}

Material material_disk_hetero()
{
  Material m;
  m.name = "disk-hetero";
  m.rho = [](const Point2 &x) { return 2.0 + 0.25 * (1.0 + x.x()) * (1.0 - x.x()); };
  m.T = [](const Point2 &x)
  {
    const double a = 0.2 * (1.0 + x.x()) * (1.0 - x.x());
    Eigen::Matrix2d T;
    T << 2.0, a, a, 1.0;
    return T;
  };
  m.rho_min = 2.0;
  m.rho_max = 2.25;
  // Eigenvalues 1.5 -+ sqrt(0.25 + a^2) with 0 <= a <= 0.2 on the unit disk.
  m.T_min = 1.5 - std::sqrt(0.25 + 0.04);
  m.T_max = 1.5 + std::sqrt(0.25 + 0.04);
  return m;
}

std::vector<std::string> material_names() { return {"unit", "aniso-const", "disk-hetero"}; }

Material material_by_name(const std::string &name)
{
  if (name == "unit")
  {
    return material_unit();
  }
  if (name == "aniso-const")
  {
    return material_aniso_const();
  }
  if (name == "disk-hetero")
  {
    return material_disk_hetero();
  }
  throw Error(ErrorKind::InvalidArgument, "unknown material '" + name + "'");
}

}  // namespace pfem
