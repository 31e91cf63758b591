// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pfem/error.hpp"
#include "pfem/materials.hpp"

using namespace pfem;

TEST(Materials, InvertT)
{
  EXPECT_NEAR((invert_T(Eigen::Matrix2d::Identity()) - Eigen::Matrix2d::Identity()).norm(), 0.0, 1e-15);
  Eigen::Matrix2d T;
  T << 5, 2, 2, 3;
  Eigen::Matrix2d expect;
  expect << 3.0 / 11.0, -2.0 / 11.0, -2.0 / 11.0, 5.0 / 11.0;
  EXPECT_NEAR((invert_T(T) - expect).norm(), 0.0, 1e-15);
  const Eigen::Matrix2d D = Eigen::Vector2d(4.0, 0.5).asDiagonal();
  EXPECT_NEAR((invert_T(D) - Eigen::Matrix2d(Eigen::Vector2d(0.25, 2.0).asDiagonal())).norm(), 0.0, 1e-15);
}

TEST(Materials, InvertTErrors)
{
  Eigen::Matrix2d sing;
  sing << 1, 1, 1, 1;
  Eigen::Matrix2d indef;
  indef << 1, 0, 0, -1;
  Eigen::Matrix2d nonsym;
  nonsym << 1, 0.5, 0, 1;
  for (const Eigen::Matrix2d &m : {sing, indef, nonsym})
  {
    try
    {
      invert_T(m);
      FAIL();
    }
    catch (const Error &e)
    {
      EXPECT_EQ(e.kind(), ErrorKind::MaterialError);
    }
  }
}

TEST(Materials, InverseAtRandomPoints)
{
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const std::string &name : material_names())
  {
    const Material mat = material_by_name(name);
    for (int s = 0; s < 1000; ++s)
    {
      const Point2 x(u(rng), u(rng));
      const Eigen::Matrix2d T = mat.T(x);
      EXPECT_LT((T * invert_T(T) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(Materials, DiskHeteroBounds)
{
  const Material mat = material_disk_hetero();
  EXPECT_NEAR(mat.rho(Point2(0, 0)), 2.25, 1e-15);
  EXPECT_NEAR(mat.rho(Point2(1, 0)), 2.0, 1e-15);
  EXPECT_NEAR(mat.rho(Point2(-1, 0.3)), 2.0, 1e-15);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 1000; ++s)
  {
    const Point2 x(u(rng), u(rng));
    if (x.squaredNorm() > 1.0)
    {
      continue;
    }
    const double r = mat.rho(x);
    EXPECT_GE(r, mat.rho_min);
    EXPECT_LE(r, mat.rho_max);
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(mat.T(x)).eigenvalues();
    EXPECT_GT(ev.minCoeff(), 0.0);
    EXPECT_GE(ev.minCoeff(), mat.T_min - 1e-12);
    EXPECT_LE(ev.maxCoeff(), mat.T_max + 1e-12);
  }
  EXPECT_DOUBLE_EQ(mat.rho_min, 2.0);
  EXPECT_DOUBLE_EQ(mat.rho_max, 2.25);
}

TEST(Materials, Lookup)
{
  EXPECT_EQ(material_by_name("unit").name, "unit");
  EXPECT_EQ(material_by_name("aniso-const").name, "aniso-const");
  EXPECT_EQ(material_by_name("disk-hetero").name, "disk-hetero");
  EXPECT_THROW(material_by_name("rubber"), Error);
  const Material a = material_aniso_const();
  Eigen::Matrix2d T;
  T << 5, 2, 2, 3;
  EXPECT_EQ(a.T(Point2(0.3, 0.7)), T);
}
