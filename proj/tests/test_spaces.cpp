// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include <gtest/gtest.h>

#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"
#include "pfem/spaces.hpp"

using namespace pfem;

namespace
{

std::shared_ptr<const Mesh> square(int n)
{
  return std::make_shared<const Mesh>(build_unit_square(n));
}

double l2_error(const FunctionSpace &V, const Eigen::VectorXd &c, const ScalarField &f)
{
  const QuadratureRule r = triangle_rule(12);
  const ReferenceTable t = V.tabulate(r.points);
  double s = 0.0;
  for (int k = 0; k < V.mesh().num_cells(); ++k)
  {
    const CellMap map = cell_map(V.mesh(), k);
    const CellBasis b = V.cell_basis(t, map, k);
    const auto &dofs = V.cell_dofs(k);
    for (std::size_t q = 0; q < r.size(); ++q)
    {
      double v = 0.0;
      for (std::size_t j = 0; j < dofs.size(); ++j)
      {
        v += c[dofs[j]] * b.value(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j));
      }
      const double d = v - f(map.to_physical(r.points[q]));
      s += r.weights[q] * std::abs(map.det) * d * d;
    }
  }
  return std::sqrt(s);
}

}  // namespace

TEST(Spaces, Dimensions)
{
  for (int n : {1, 2, 4, 7})
  {
    const auto m = square(n);
    EXPECT_EQ(FunctionSpace(m, {FamilyKind::CG, 1}).dim(), (n + 1) * (n + 1));
    EXPECT_EQ(FunctionSpace(m, {FamilyKind::DG, 0}).dim(), 2 * n * n);
    EXPECT_EQ(FunctionSpace(m, {FamilyKind::RT, 1, ValueShape::Vector2}).dim(), 3 * n * n + 2 * n);
    EXPECT_EQ(FunctionSpace(m, {FamilyKind::CG, 1, ValueShape::Vector2}).dim(), 2 * (n + 1) * (n + 1));
    EXPECT_EQ(FunctionSpace(m, {FamilyKind::CG, 2}).dim(), (2 * n + 1) * (2 * n + 1));
    EXPECT_EQ(FunctionSpace(m, {FamilyKind::DG, 2}).dim(), 12 * n * n);
    EXPECT_EQ(build_boundary_space(m, FamilyKind::DG, 0).dim(), 4 * n);
    EXPECT_EQ(build_boundary_space(m, FamilyKind::DG, 1).dim(), 8 * n);
    EXPECT_EQ(build_boundary_space(m, FamilyKind::CG, 1).dim(), 4 * n + 4);
    EXPECT_EQ(build_boundary_space(m, FamilyKind::CG, 2).dim(), 8 * n + 4);
    EXPECT_EQ(build_boundary_space(m, FamilyKind::CG, 1, BoundaryCorners::Continuous).dim(), 4 * n);
    EXPECT_EQ(build_boundary_space(m, FamilyKind::CG, 2, BoundaryCorners::Continuous).dim(), 8 * n);
  }
}

TEST(Spaces, BoundaryCornerSplit)
{
  // The L-shape has six corners; the disk polygon has none once refined.
  const auto l = std::make_shared<const Mesh>(build_lshape(4));
  const int nb = static_cast<int>(l->boundary_edges.size());
  EXPECT_EQ(build_boundary_space(l, FamilyKind::CG, 1).dim(), nb + 6);
  EXPECT_EQ(build_boundary_space(l, FamilyKind::CG, 1, BoundaryCorners::Continuous).dim(), nb);
  const auto d = std::make_shared<const Mesh>(build_disk(3));
  const int nd = static_cast<int>(d->boundary_edges.size());
  EXPECT_EQ(build_boundary_space(d, FamilyKind::CG, 2).dim(), 2 * nd);

  // A sided step function is reproduced exactly by split CG_1 but not by the continuous one.
  const auto m = square(3);
  const BoundaryField f = [](const Point2 &, const Point2 &n) { return n.x() + 2.0 * n.y(); };
  for (auto mode : {BoundaryCorners::Split, BoundaryCorners::Continuous})
  {
    const BoundarySpace S = build_boundary_space(m, FamilyKind::CG, 1, mode);
    const Eigen::VectorXd c = S.interpolate(f);
    double err = 0.0;
    for (int b = 0; b < S.num_edges(); ++b)
    {
      const double exact = f({}, m->outward_normal(b));
      for (double s : {0.0, 0.3, 1.0})
      {
        const Eigen::VectorXd psi = S.eval_basis(s);
        double v = 0.0;
        for (int i = 0; i < 2; ++i)
        {
          v += c[S.edge_dofs(b)[static_cast<std::size_t>(i)]] * psi[i];
        }
        err = std::max(err, std::abs(v - exact));
      }
    }
    if (mode == BoundaryCorners::Split)
    {
      EXPECT_LT(err, 1e-12);
    }
    else
    {
      EXPECT_GT(err, 0.1);
    }
  }
}

TEST(Spaces, InvalidBoundaryOrder)
{
  const auto m = square(2);
  EXPECT_THROW(build_boundary_space(m, FamilyKind::CG, 0), Error);
  EXPECT_THROW(build_boundary_space(m, FamilyKind::DG, -1), Error);
  EXPECT_THROW(build_boundary_space(m, FamilyKind::RT, 1), Error);
}

TEST(Spaces, Conformity)
{
  const auto m = square(2);
  EXPECT_EQ(FunctionSpace(m, {FamilyKind::CG, 1}).conformity(), Conformity::H1);
  EXPECT_EQ(FunctionSpace(m, {FamilyKind::DG, 1}).conformity(), Conformity::L2);
  EXPECT_EQ(FunctionSpace(m, {FamilyKind::RT, 1, ValueShape::Vector2}).conformity(), Conformity::Hdiv);
  EXPECT_EQ(FunctionSpace(m, {FamilyKind::CG, 1, ValueShape::Vector2}).conformity(), Conformity::H1);
  EXPECT_EQ(FunctionSpace(m, {FamilyKind::DG, 1, ValueShape::Vector2}).conformity(), Conformity::L2);
}

TEST(Spaces, DeterministicMaps)
{
  const auto m = square(3);
  for (ElementFamily f : {ElementFamily{FamilyKind::CG, 3}, ElementFamily{FamilyKind::BDM, 2, ValueShape::Vector2}})
  {
    const FunctionSpace a(m, f), b(m, f);
    for (int c = 0; c < m->num_cells(); ++c)
    {
      EXPECT_EQ(a.cell_dofs(c), b.cell_dofs(c));
      EXPECT_EQ(a.cell_signs(c), b.cell_signs(c));
    }
  }
}

TEST(Spaces, DofCountIsDistinctCount)
{
  const auto m = std::make_shared<const Mesh>(build_lshape(4));
  for (ElementFamily f : {ElementFamily{FamilyKind::CG, 3}, ElementFamily{FamilyKind::DG, 1},
                          ElementFamily{FamilyKind::RT, 2, ValueShape::Vector2},
                          ElementFamily{FamilyKind::CG, 2, ValueShape::Vector2}})
  {
    const FunctionSpace V(m, f);
    std::vector<int> seen(static_cast<std::size_t>(V.dim()), 0);
    for (int c = 0; c < m->num_cells(); ++c)
    {
      for (int d : V.cell_dofs(c))
      {
        seen[static_cast<std::size_t>(d)] = 1;
      }
    }
    int count = 0;
    for (int s : seen)
    {
      count += s;
    }
    EXPECT_EQ(count, V.dim()) << f.name();
  }
}

TEST(Spaces, ConstantInterpolation)
{
  const auto m = square(3);
  for (int k = 1; k <= 3; ++k)
  {
    const FunctionSpace V(m, {FamilyKind::CG, k});
    const Eigen::VectorXd c = V.interpolate([](const Point2 &) { return 2.5; });
    EXPECT_NEAR((c.array() - 2.5).abs().maxCoeff(), 0.0, 1e-13);
  }
  const FunctionSpace Q(m, {FamilyKind::RT, 1, ValueShape::Vector2});
  try
  {
    Q.interpolate([](const Point2 &) { return 1.0; });
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
  const FunctionSpace P(m, {FamilyKind::CG, 1});
  EXPECT_THROW(P.interpolate([](const Point2 &x) { return Eigen::Vector2d(x); }), Error);
}

TEST(Spaces, VectorReproduction)
{
  const auto m = square(3);
  const auto f = [](const Point2 &x) { return Eigen::Vector2d(x.x(), x.y()); };
  for (ElementFamily fam : {ElementFamily{FamilyKind::RT, 1, ValueShape::Vector2},
                            ElementFamily{FamilyKind::RT, 2, ValueShape::Vector2},
                            ElementFamily{FamilyKind::BDM, 1, ValueShape::Vector2},
                            ElementFamily{FamilyKind::CG, 1, ValueShape::Vector2}})
  {
    const FunctionSpace V(m, fam);
    const Eigen::VectorXd c = V.interpolate(f);
    const QuadratureRule r = triangle_rule(4);
    for (int k = 0; k < m->num_cells(); ++k)
    {
      const CellMap map = cell_map(*m, k);
      for (const auto &p : r.points)
      {
        EXPECT_NEAR((V.eval_vector(c, k, p) - f(map.to_physical(p))).norm(), 0.0, 1e-12) << fam.name();
      }
    }
  }
}

TEST(Spaces, HdivNormalContinuity)
{
  const auto m = std::make_shared<const Mesh>(build_disk(2));
  const QuadratureRule r = edge_rule(6);
  for (ElementFamily fam : {ElementFamily{FamilyKind::RT, 1, ValueShape::Vector2},
                            ElementFamily{FamilyKind::RT, 2, ValueShape::Vector2},
                            ElementFamily{FamilyKind::BDM, 1, ValueShape::Vector2},
                            ElementFamily{FamilyKind::BDM, 2, ValueShape::Vector2}})
  {
    const FunctionSpace V(m, fam);
    for (int e = 0; e < m->num_edges(); ++e)
    {
      const auto ec = m->edge_cells[e];
      if (ec[1] < 0)
      {
        continue;
      }
      const Point2 a = m->vertices[m->edges[e][0]], b = m->vertices[m->edges[e][1]];
      const Point2 t = b - a;
      const Point2 n(-t.y(), t.x());
      std::map<int, std::vector<double>> trace[2];
      for (int side = 0; side < 2; ++side)
      {
        const int c = ec[side];
        const CellMap map = cell_map(*m, c);
        std::vector<Eigen::Vector2d> ref;
        for (const auto &p : r.points)
        {
          ref.push_back(map.to_reference(a + p.x() * t));
        }
        const CellBasis cb = V.cell_basis(V.tabulate(ref), map, c);
        const auto &dofs = V.cell_dofs(c);
        for (std::size_t j = 0; j < dofs.size(); ++j)
        {
          for (std::size_t q = 0; q < ref.size(); ++q)
          {
            const auto qi = static_cast<Eigen::Index>(q), ji = static_cast<Eigen::Index>(j);
            trace[side][dofs[j]].push_back(n.x() * cb.vx(qi, ji) + n.y() * cb.vy(qi, ji));
          }
        }
      }
      for (auto &[dof, vals] : trace[0])
      {
        const auto it = trace[1].find(dof);
        for (std::size_t q = 0; q < vals.size(); ++q)
        {
          const double other = it == trace[1].end() ? 0.0 : it->second[q];
          EXPECT_NEAR(vals[q], other, 1e-12) << fam.name() << " edge " << e << " dof " << dof;
        }
      }
      for (auto &[dof, vals] : trace[1])
      {
        if (trace[0].count(dof) == 0)
        {
          for (double v : vals)
          {
            EXPECT_NEAR(v, 0.0, 1e-12);
          }
        }
      }
    }
  }
}

TEST(Spaces, BoundaryControlEdgeAverage)
{
  // -3 cos(x) on the side y = 0, n = 9: the edge centered at x = 0.5 holds its average.
  const auto m = square(9);
  const BoundarySpace S = build_boundary_space(m, FamilyKind::DG, 0);
  const Eigen::VectorXd u = S.interpolate([](const Point2 &x, const Point2 &n) {
    return n.y() < -0.5 ? -3.0 * std::cos(x.x()) : 0.0;
  });
  bool found = false;
  for (int b = 0; b < S.num_edges(); ++b)
  {
    const Point2 mid = S.edge_point(b, 0.5);
    if (std::abs(mid.y()) < 1e-14 && std::abs(mid.x() - 0.5) < 1e-14)
    {
      found = true;
      const double avg = -3.0 * (std::sin(5.0 / 9.0) - std::sin(4.0 / 9.0)) * 9.0;
      EXPECT_NEAR(u[S.edge_dofs(b)[0]], avg, 1e-13);
      EXPECT_NEAR(u[S.edge_dofs(b)[0]], -3.0 * std::cos(0.5), 2e-3);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Spaces, BoundaryInterpolationReproducesSpace)
{
  const auto m = square(3);
  for (int k = 1; k <= 3; ++k)
  {
    const BoundarySpace S = build_boundary_space(m, FamilyKind::CG, k);
    const Eigen::VectorXd c = S.interpolate([](const Point2 &x, const Point2 &) { return x.x() + 2.0 * x.y(); });
    for (int b = 0; b < S.num_edges(); ++b)
    {
      for (double s : {0.0, 0.3, 1.0})
      {
        const Eigen::VectorXd psi = S.eval_basis(s);
        double v = 0.0;
        for (int j = 0; j <= k; ++j)
        {
          v += c[S.edge_dofs(b)[j]] * psi[j];
        }
        const Point2 x = S.edge_point(b, s);
        EXPECT_NEAR(v, x.x() + 2.0 * x.y(), 1e-12);
      }
    }
  }
}

TEST(Spaces, InterpolationOrder)
{
  const auto f = [](const Point2 &x) { return std::sin(2.0 * x.x()) * std::cos(3.0 * x.y()); };
  for (int l = 1; l <= 3; ++l)
  {
    std::vector<double> err, hs;
    for (int n : {4, 8, 16})
    {
      const auto m = square(n);
      const FunctionSpace V(m, {FamilyKind::CG, l});
      err.push_back(l2_error(V, V.interpolate(f), f));
      hs.push_back(m->h);
    }
    const double slope = std::log(err[2] / err[1]) / std::log(hs[2] / hs[1]);
    EXPECT_NEAR(slope, l + 1.0, 0.15) << "CG_" << l;
  }
}
