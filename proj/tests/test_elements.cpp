// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pfem/elements.hpp"
#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"

using namespace pfem;

namespace
{

std::vector<ElementFamily> all_families()
{
  std::vector<ElementFamily> out;
  for (int k = 1; k <= 3; ++k)
  {
    out.push_back({FamilyKind::CG, k, ValueShape::Scalar});
  }
  for (int k = 0; k <= 3; ++k)
  {
    out.push_back({FamilyKind::DG, k, ValueShape::Scalar});
  }
  for (int k = 1; k <= 2; ++k)
  {
    out.push_back({FamilyKind::RT, k, ValueShape::Vector2});
    out.push_back({FamilyKind::BDM, k, ValueShape::Vector2});
  }
  return out;
}

int expected_dofs(const ElementFamily &f)
{
  const int k = f.order;
  switch (f.kind)
  {
  case FamilyKind::CG:
  case FamilyKind::DG: return (k + 1) * (k + 2) / 2;
  case FamilyKind::RT: return k * (k + 2);
  case FamilyKind::BDM: return (k + 1) * (k + 2);
  }
  return -1;
}

}  // namespace

TEST(Elements, ParseAndName)
{
  EXPECT_EQ(ElementFamily::parse("CG1").name(), "CG_1");
  EXPECT_EQ(ElementFamily::parse("RT_2").shape, ValueShape::Vector2);
  EXPECT_EQ(ElementFamily::parse("dg0").kind, FamilyKind::DG);
  EXPECT_THROW(ElementFamily::parse("XY1"), Error);
  EXPECT_THROW(validate_family({FamilyKind::RT, 3, ValueShape::Vector2}), Error);
  EXPECT_THROW(validate_family({FamilyKind::CG, 0, ValueShape::Scalar}), Error);
  EXPECT_THROW(validate_family({FamilyKind::CG, 4, ValueShape::Scalar}), Error);
}

TEST(Elements, DofCountsAndDuality)
{
  for (const ElementFamily &f : all_families())
  {
    const ReferenceElement e(f);
    ASSERT_EQ(e.dof_count(), expected_dofs(f)) << f.name();
    for (int j = 0; j < e.dof_count(); ++j)
    {
      for (int i = 0; i < e.dof_count(); ++i)
      {
        double v = 0.0;
        if (e.is_vector())
        {
          v = e.apply_vector_functional(i, [&](const Eigen::Vector2d &p) {
            return Eigen::Vector2d(e.eval_hdiv(p).values.row(j).transpose());
          });
        }
        else
        {
          v = e.apply_scalar_functional(i, [&](const Eigen::Vector2d &p) { return e.eval_scalar(p).values[j]; });
        }
        EXPECT_NEAR(v, i == j ? 1.0 : 0.0, 1e-12) << f.name() << " l_" << i << "(phi_" << j << ")";
      }
    }
  }
}

TEST(Elements, PartitionOfUnity)
{
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 1; k <= 3; ++k)
  {
    const ReferenceElement e({FamilyKind::CG, k, ValueShape::Scalar});
    for (int s = 0; s < 20; ++s)
    {
      double a = u(rng), b = u(rng);
      if (a + b > 1.0)
      {
        a = 1.0 - a;
        b = 1.0 - b;
      }
      const ScalarBasisValues v = e.eval_scalar({a, b});
      EXPECT_NEAR(v.values.sum(), 1.0, 1e-12);
      EXPECT_NEAR(v.gradients.col(0).sum(), 0.0, 1e-11);
      EXPECT_NEAR(v.gradients.col(1).sum(), 0.0, 1e-11);
    }
  }
}

TEST(Elements, CG1Values)
{
  const ReferenceElement e({FamilyKind::CG, 1, ValueShape::Scalar});
  const ScalarBasisValues v = e.eval_scalar({0.0, 0.0});
  EXPECT_NEAR(v.values[0], 1.0, 1e-15);
  EXPECT_NEAR(v.values[1], 0.0, 1e-15);
  EXPECT_NEAR(v.values[2], 0.0, 1e-15);
  const ScalarBasisValues g = e.eval_scalar({0.2, 0.3});
  EXPECT_NEAR(g.gradients(0, 0), -1.0, 1e-14);
  EXPECT_NEAR(g.gradients(0, 1), -1.0, 1e-14);
  EXPECT_NEAR(g.gradients(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(g.gradients(1, 1), 0.0, 1e-14);
  EXPECT_NEAR(g.gradients(2, 0), 0.0, 1e-14);
  EXPECT_NEAR(g.gradients(2, 1), 1.0, 1e-14);
}

TEST(Elements, CG2EdgeMidpoint)
{
  const ReferenceElement e({FamilyKind::CG, 2, ValueShape::Scalar});
  // (1/2, 0) is the midpoint of local edge 2 (vertices 0 and 1).
  const int mid = e.edge_dofs(2).at(0);
  const ScalarBasisValues v = e.eval_scalar({0.5, 0.0});
  for (int j = 0; j < e.dof_count(); ++j)
  {
    EXPECT_NEAR(v.values[j], j == mid ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Elements, FamilyMismatch)
{
  const ReferenceElement rt({FamilyKind::RT, 1, ValueShape::Vector2});
  const ReferenceElement cg({FamilyKind::CG, 1, ValueShape::Scalar});
  try
  {
    rt.eval_scalar({0.1, 0.1});
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::FamilyMismatch);
  }
  EXPECT_THROW(cg.eval_hdiv({0.1, 0.1}), Error);
}

TEST(Elements, RT1Properties)
{
  const ReferenceElement e({FamilyKind::RT, 1, ValueShape::Vector2});
  ASSERT_EQ(e.dof_count(), 3);
  const HdivBasisValues a = e.eval_hdiv({0.1, 0.2});
  const HdivBasisValues b = e.eval_hdiv({0.6, 0.3});
  for (int j = 0; j < 3; ++j)
  {
    EXPECT_NEAR(a.divergences[j], b.divergences[j], 1e-13);
  }
  // Zero normal component on the other edges.
  const QuadratureRule r = edge_rule(4);
  for (int j = 0; j < 3; ++j)
  {
    for (int ed = 0; ed < 3; ++ed)
    {
      if (e.edge_dofs(ed).at(0) == j)
      {
        continue;
      }
      const auto vv = reference_edge_vertices(ed);
      const Eigen::Vector2d p0 = reference_vertex(vv[0]), p1 = reference_vertex(vv[1]);
      const Eigen::Vector2d t = p1 - p0;
      const Eigen::Vector2d n(t.y(), -t.x());
      for (std::size_t q = 0; q < r.size(); ++q)
      {
        const Eigen::Vector2d x = p0 + r.points[q].x() * t;
        EXPECT_NEAR(e.eval_hdiv(x).values.row(j).dot(n), 0.0, 1e-13);
      }
    }
  }
}

TEST(Elements, BDM1Linear)
{
  const ReferenceElement e({FamilyKind::BDM, 1, ValueShape::Vector2});
  ASSERT_EQ(e.dof_count(), 6);
  // Each component is affine: f(a) + f(b) = 2 f((a+b)/2).
  const Eigen::Vector2d a(0.1, 0.7), b(0.5, 0.2);
  const Eigen::MatrixX2d va = e.eval_hdiv(a).values, vb = e.eval_hdiv(b).values;
  const Eigen::MatrixX2d vm = e.eval_hdiv(0.5 * (a + b)).values;
  EXPECT_LT((va + vb - 2.0 * vm).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Elements, CellMapIdentityAndDegenerate)
{
  const CellMap id = make_cell_map({0, 0}, {1, 0}, {0, 1});
  EXPECT_NEAR((id.B - Eigen::Matrix2d::Identity()).norm(), 0.0, 1e-15);
  const Eigen::Vector2d v(0.3, -0.4);
  EXPECT_NEAR((id.piola(v) - v).norm(), 0.0, 1e-15);
  EXPECT_NEAR((id.map_gradient(v) - v).norm(), 0.0, 1e-15);
  try
  {
    make_cell_map({0, 0}, {1, 1}, {2, 2});
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateCell);
  }
}

TEST(Elements, PiolaPreservesFlux)
{
  const CellMap map = make_cell_map({0.3, 0.1}, {1.4, 0.5}, {0.2, 1.3});
  ASSERT_GT(map.det, 0.0);
  for (FamilyKind kind : {FamilyKind::RT, FamilyKind::BDM})
  {
    const ReferenceElement e({kind, 2, ValueShape::Vector2});
    const QuadratureRule r = edge_rule(8);
    for (int ed = 0; ed < 3; ++ed)
    {
      const auto vv = reference_edge_vertices(ed);
      const Eigen::Vector2d p0 = reference_vertex(vv[0]), p1 = reference_vertex(vv[1]);
      const Eigen::Vector2d x0 = map.to_physical(p0), x1 = map.to_physical(p1);
      const Eigen::Vector2d t = p1 - p0, tx = x1 - x0;
      const Eigen::Vector2d n_ref = Eigen::Vector2d(t.y(), -t.x()) / t.norm();
      const Eigen::Vector2d n_phys = Eigen::Vector2d(tx.y(), -tx.x()) / tx.norm();
      for (int j = 0; j < e.dof_count(); ++j)
      {
        double ref_flux = 0.0, phys_flux = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q)
        {
          const Eigen::Vector2d xh = p0 + r.points[q].x() * t;
          const Eigen::Vector2d vh = e.eval_hdiv(xh).values.row(j).transpose();
          ref_flux += r.weights[q] * t.norm() * vh.dot(n_ref);
          phys_flux += r.weights[q] * tx.norm() * map.piola(vh).dot(n_phys);
        }
        EXPECT_NEAR(ref_flux, phys_flux, 1e-12);
      }
    }
  }
}

TEST(Elements, MappedGradientExactOnLinear)
{
  const CellMap map = make_cell_map({0.3, 0.1}, {1.4, 0.5}, {0.2, 1.3});
  const ReferenceElement e({FamilyKind::CG, 1, ValueShape::Scalar});
  const Eigen::VectorXd c = interpolate_local_scalar(e, [](const Point2 &x) { return x.x(); }, map);
  const ScalarBasisValues v = e.eval_scalar({0.25, 0.25});
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int j = 0; j < 3; ++j)
  {
    g += c[j] * map.map_gradient(v.gradients.row(j).transpose());
  }
  EXPECT_NEAR(g.x(), 1.0, 1e-13);
  EXPECT_NEAR(g.y(), 0.0, 1e-13);
}

TEST(Elements, LocalInterpolation)
{
  const CellMap map = make_cell_map({0.3, 0.1}, {1.4, 0.5}, {0.2, 1.3});
  for (int k = 1; k <= 3; ++k)
  {
    const ReferenceElement e({FamilyKind::CG, k, ValueShape::Scalar});
    const Eigen::VectorXd c = interpolate_local_scalar(e, [](const Point2 &) { return 1.0; }, map);
    EXPECT_NEAR((c.array() - 1.0).abs().maxCoeff(), 0.0, 1e-14);
  }
  // (x, y) lies in every RT/BDM space.
  for (FamilyKind kind : {FamilyKind::RT, FamilyKind::BDM})
  {
    const ReferenceElement e({kind, 1, ValueShape::Vector2});
    const auto f = [](const Point2 &x) { return Eigen::Vector2d(x); };
    const Eigen::VectorXd c = interpolate_local_vector(e, f, map);
    for (const Eigen::Vector2d xh : {Eigen::Vector2d(0.2, 0.2), Eigen::Vector2d(0.6, 0.1)})
    {
      const HdivBasisValues b = e.eval_hdiv(xh);
      Eigen::Vector2d v = Eigen::Vector2d::Zero();
      for (int j = 0; j < e.dof_count(); ++j)
      {
        v += c[j] * map.piola(b.values.row(j).transpose());
      }
      EXPECT_NEAR((v - f(map.to_physical(xh))).norm(), 0.0, 1e-12);
    }
  }
}

TEST(Elements, CG2InterpolationRatio)
{
  // Max error of sin(x) interpolated on a shrinking cell drops by ~8 when h halves.
  const ReferenceElement e({FamilyKind::CG, 2, ValueShape::Scalar});
  auto max_err = [&](double h) {
    const CellMap map = make_cell_map({0.4, 0.2}, {0.4 + h, 0.2}, {0.4, 0.2 + h});
    const auto f = [](const Point2 &x) { return std::sin(x.x()); };
    const Eigen::VectorXd c = interpolate_local_scalar(e, f, map);
    double m = 0.0;
    const QuadratureRule r = triangle_rule(8);
    for (const auto &p : r.points)
    {
      m = std::max(m, std::abs(e.eval_scalar(p).values.dot(c) - f(map.to_physical(p))));
    }
    return m;
  };
  const double ratio = max_err(0.1) / max_err(0.05);
  EXPECT_NEAR(ratio, 8.0, 0.5);
}
