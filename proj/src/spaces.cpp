// SPDX-License-Identifier: Apache-2.0

#include "pfem/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"

namespace pfem
{

namespace
{

bool local_edge_matches_global(const Mesh &mesh, int c, int i)
{
  const auto &v = mesh.cells[static_cast<std::size_t>(c)];
  return v[(i + 1) % 3] < v[(i + 2) % 3];
}

Conformity conformity_of(const ElementFamily &f)
{
  switch (f.kind)
  {
    case FamilyKind::CG: return Conformity::H1;
    case FamilyKind::DG: return Conformity::L2;
    default: return Conformity::Hdiv;
  }
}

}  // namespace

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, const ElementFamily &family)
  : mesh_(std::move(mesh)), family_(family), element_(family), conformity_(conformity_of(family))
{
  PFEM_THROW_IF(!mesh_, InvalidArgument, "FunctionSpace: null mesh");
  components_ = (family_.is_lagrange() && family_.shape == ValueShape::Vector2) ? 2 : 1;
  if (family_.is_lagrange())
  {
    number_lagrange();
  }
  else
  {
    number_hdiv();
  }
}

void FunctionSpace::number_lagrange()
{
  const Mesh &m = *mesh_;
  const int nloc = element_.dof_count();
  const int k = family_.order;
  std::vector<std::vector<int>> scalar(static_cast<std::size_t>(m.num_cells()),
                                       std::vector<int>(static_cast<std::size_t>(nloc)));
  int nscalar = 0;
  if (family_.kind == FamilyKind::DG)
  {
    for (int c = 0; c < m.num_cells(); ++c)
    {
      for (int j = 0; j < nloc; ++j)
      {
        scalar[c][j] = c * nloc + j;
      }
    }
    nscalar = m.num_cells() * nloc;
  }
  else
  {
    const int per_edge = k - 1;
    const int per_cell = static_cast<int>(element_.interior_dofs().size());
    const int edge_offset = m.num_vertices();
    const int cell_offset = edge_offset + m.num_edges() * per_edge;
    for (int c = 0; c < m.num_cells(); ++c)
    {
      const auto &v = m.cells[static_cast<std::size_t>(c)];
      const auto &ce = m.cell_edges[static_cast<std::size_t>(c)];
      for (int i = 0; i < 3; ++i)
      {
        scalar[c][element_.vertex_dofs(i)[0]] = v[i];
        const auto &ed = element_.edge_dofs(i);
        const bool same = local_edge_matches_global(m, c, i);
        for (int j = 0; j < per_edge; ++j)
        {
          const int jg = same ? j : per_edge - 1 - j;
          scalar[c][ed[j]] = edge_offset + ce[i] * per_edge + jg;
        }
      }
      const auto &in = element_.interior_dofs();
      for (int j = 0; j < per_cell; ++j)
      {
        scalar[c][in[j]] = cell_offset + c * per_cell + j;
      }
    }
    nscalar = cell_offset + m.num_cells() * per_cell;
  }

  cell_dofs_.resize(scalar.size());
  cell_signs_.resize(scalar.size());
  for (std::size_t c = 0; c < scalar.size(); ++c)
  {
    cell_dofs_[c].resize(static_cast<std::size_t>(nloc * components_));
    cell_signs_[c].assign(static_cast<std::size_t>(nloc * components_), 1.0);
    for (int j = 0; j < nloc; ++j)
    {
      for (int comp = 0; comp < components_; ++comp)
      {
        cell_dofs_[c][components_ * j + comp] = components_ * scalar[c][j] + comp;
      }
    }
  }
  ndofs_ = nscalar * components_;
}

void FunctionSpace::number_hdiv()
{
  const Mesh &m = *mesh_;
  const int nloc = element_.dof_count();
  const int per_edge = static_cast<int>(element_.edge_dofs(0).size());
  const int per_cell = static_cast<int>(element_.interior_dofs().size());
  const int cell_offset = m.num_edges() * per_edge;
  cell_dofs_.assign(static_cast<std::size_t>(m.num_cells()), std::vector<int>(static_cast<std::size_t>(nloc)));
  cell_signs_.assign(static_cast<std::size_t>(m.num_cells()), std::vector<double>(static_cast<std::size_t>(nloc), 1.0));
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const auto &ce = m.cell_edges[static_cast<std::size_t>(c)];
    for (int i = 0; i < 3; ++i)
    {
      const bool same = local_edge_matches_global(m, c, i);
      const auto &ed = element_.edge_dofs(i);
      for (int mo = 0; mo < per_edge; ++mo)
      {
        cell_dofs_[c][ed[mo]] = ce[i] * per_edge + mo;
        // Same direction: global normal is inward. Opposite direction: the parameter
        // flips, which changes the sign of odd Legendre moments.
        cell_signs_[c][ed[mo]] = same ? -1.0 : (mo % 2 == 0 ? 1.0 : -1.0);
      }
    }
    const auto &in = element_.interior_dofs();
    for (int j = 0; j < per_cell; ++j)
    {
      cell_dofs_[c][in[j]] = cell_offset + c * per_cell + j;
    }
  }
  ndofs_ = cell_offset + m.num_cells() * per_cell;
}

ReferenceTable FunctionSpace::tabulate(const std::vector<Eigen::Vector2d> &ref_points) const
{
  ReferenceTable t;
  t.points = ref_points;
  const auto np = static_cast<Eigen::Index>(ref_points.size());
  const int n = element_.dof_count();
  if (element_.is_vector())
  {
    t.vx.resize(np, n);
    t.vy.resize(np, n);
    t.div.resize(np, n);
    for (Eigen::Index q = 0; q < np; ++q)
    {
      const auto b = element_.eval_hdiv(ref_points[static_cast<std::size_t>(q)]);
      t.vx.row(q) = b.values.col(0).transpose();
      t.vy.row(q) = b.values.col(1).transpose();
      t.div.row(q) = b.divergences.transpose();
    }
  }
  else
  {
    t.value.resize(np, n);
    t.dxi.resize(np, n);
    t.deta.resize(np, n);
    for (Eigen::Index q = 0; q < np; ++q)
    {
      const auto b = element_.eval_scalar(ref_points[static_cast<std::size_t>(q)]);
      t.value.row(q) = b.values.transpose();
      t.dxi.row(q) = b.gradients.col(0).transpose();
      t.deta.row(q) = b.gradients.col(1).transpose();
    }
  }
  return t;
}

CellBasis FunctionSpace::cell_basis(const ReferenceTable &t, const CellMap &map, int c) const
{
  CellBasis cb;
  const auto np = static_cast<Eigen::Index>(t.points.size());
  if (element_.is_vector())
  {
    const Eigen::Matrix2d &B = map.B;
    cb.vx = (B(0, 0) * t.vx + B(0, 1) * t.vy) / map.det;
    cb.vy = (B(1, 0) * t.vx + B(1, 1) * t.vy) / map.det;
    cb.div = t.div / map.det;
    const auto &signs = cell_signs(c);
    for (Eigen::Index j = 0; j < cb.vx.cols(); ++j)
    {
      if (signs[static_cast<std::size_t>(j)] < 0.0)
      {
        cb.vx.col(j) *= -1.0;
        cb.vy.col(j) *= -1.0;
        cb.div.col(j) *= -1.0;
      }
    }
    return cb;
  }

  const Eigen::Matrix2d &Bi = map.B_inv;
  const Eigen::MatrixXd gx = Bi(0, 0) * t.dxi + Bi(1, 0) * t.deta;
  const Eigen::MatrixXd gy = Bi(0, 1) * t.dxi + Bi(1, 1) * t.deta;
  if (components_ == 1)
  {
    cb.value = t.value;
    cb.grad_x = gx;
    cb.grad_y = gy;
    return cb;
  }
  const auto n = t.value.cols();
  cb.vx = Eigen::MatrixXd::Zero(np, 2 * n);
  cb.vy = Eigen::MatrixXd::Zero(np, 2 * n);
  cb.div = Eigen::MatrixXd::Zero(np, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    cb.vx.col(2 * j) = t.value.col(j);
    cb.vy.col(2 * j + 1) = t.value.col(j);
    cb.div.col(2 * j) = gx.col(j);
    cb.div.col(2 * j + 1) = gy.col(j);
  }
  return cb;
}

Eigen::VectorXd FunctionSpace::interpolate(const ScalarField &f) const
{
  PFEM_THROW_IF(is_vector(), ShapeMismatch,
                "interpolate: scalar field into vector space " + family_.name());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ndofs_);
  for (int c = 0; c < mesh_->num_cells(); ++c)
  {
    const Eigen::VectorXd local = interpolate_local_scalar(element_, f, cell_map(*mesh_, c));
    const auto &dofs = cell_dofs(c);
    for (int j = 0; j < local.size(); ++j)
    {
      out[dofs[static_cast<std::size_t>(j)]] = local[j];
    }
  }
  return out;
}

Eigen::VectorXd FunctionSpace::interpolate(const VectorField &f) const
{
  PFEM_THROW_IF(!is_vector(), ShapeMismatch,
                "interpolate: vector field into scalar space " + family_.name());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ndofs_);
  for (int c = 0; c < mesh_->num_cells(); ++c)
  {
    const CellMap map = cell_map(*mesh_, c);
    const auto &dofs = cell_dofs(c);
    const auto &signs = cell_signs(c);
    if (element_.is_vector())
    {
      const Eigen::VectorXd local = interpolate_local_vector(element_, f, map);
      for (int j = 0; j < local.size(); ++j)
      {
        out[dofs[static_cast<std::size_t>(j)]] = signs[static_cast<std::size_t>(j)] * local[j];
      }
      continue;
    }
    for (int comp = 0; comp < 2; ++comp)
    {
      const Eigen::VectorXd local = interpolate_local_scalar(
          element_, [&](const Point2 &x) { return f(x)[comp]; }, map);
      for (int j = 0; j < local.size(); ++j)
      {
        out[dofs[static_cast<std::size_t>(2 * j + comp)]] = local[j];
      }
    }
  }
  return out;
}

double FunctionSpace::eval_scalar(const Eigen::VectorXd &coeffs, int c,
                                  const Eigen::Vector2d &ref) const
{
  PFEM_THROW_IF(is_vector(), ShapeMismatch, "eval_scalar on vector space");
  const Eigen::VectorXd v = element_.eval_scalar(ref).values;
  const auto &dofs = cell_dofs(c);
  double s = 0.0;
  for (int j = 0; j < v.size(); ++j)
  {
    s += coeffs[dofs[static_cast<std::size_t>(j)]] * v[j];
  }
  return s;
}

Eigen::Vector2d FunctionSpace::eval_vector(const Eigen::VectorXd &coeffs, int c,
                                           const Eigen::Vector2d &ref) const
{
  PFEM_THROW_IF(!is_vector(), ShapeMismatch, "eval_vector on scalar space");
  const ReferenceTable t = tabulate({ref});
  const CellBasis cb = cell_basis(t, cell_map(*mesh_, c), c);
  const auto &dofs = cell_dofs(c);
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  for (int j = 0; j < cb.vx.cols(); ++j)
  {
    const double a = coeffs[dofs[static_cast<std::size_t>(j)]];
    s += a * Eigen::Vector2d(cb.vx(0, j), cb.vy(0, j));
  }
  return s;
}

Eigen::VectorXd lagrange_1d(int order, double s)
{
  Eigen::VectorXd v(order + 1);
  if (order == 0)
  {
    v[0] = 1.0;
    return v;
  }
  for (int j = 0; j <= order; ++j)
  {
    double p = 1.0;
    const double sj = static_cast<double>(j) / order;
    for (int i = 0; i <= order; ++i)
    {
      if (i != j)
      {
        const double si = static_cast<double>(i) / order;
        p *= (s - si) / (sj - si);
      }
    }
    v[j] = p;
  }
  return v;
}

BoundarySpace::BoundarySpace(std::shared_ptr<const Mesh> mesh, FamilyKind kind, int order,
                             BoundaryCorners corners)
  : mesh_(std::move(mesh)), kind_(kind), order_(order)
{
  PFEM_THROW_IF(!mesh_, InvalidArgument, "BoundarySpace: null mesh");
  PFEM_THROW_IF(kind != FamilyKind::DG && kind != FamilyKind::CG, InvalidArgument,
                "boundary space must be DG or CG");
  PFEM_THROW_IF(kind == FamilyKind::DG && (order < 0 || order > 3), InvalidArgument,
                "boundary DG order must be in [0, 3]");
  PFEM_THROW_IF(kind == FamilyKind::CG && (order < 1 || order > 3), InvalidArgument,
                "boundary CG order must be in [1, 3]");

  const Mesh &m = *mesh_;
  const int nb = static_cast<int>(m.boundary_edges.size());
  edge_dofs_.resize(static_cast<std::size_t>(nb));
  if (kind_ == FamilyKind::DG)
  {
    for (int b = 0; b < nb; ++b)
    {
      for (int j = 0; j <= order_; ++j)
      {
        edge_dofs_[b].push_back(b * (order_ + 1) + j);
      }
    }
    ndofs_ = nb * (order_ + 1);
  }
  else
  {
    // A corner vertex gets one dof per adjacent edge, any other boundary vertex one shared
    // dof. Vertex dofs come first (in order of first appearance), then edge interiors.
    std::vector<std::vector<int>> touching(static_cast<std::size_t>(m.num_vertices()));
    for (int b = 0; b < nb; ++b)
    {
      for (int v : m.edges[static_cast<std::size_t>(m.boundary_edges[b].edge)])
      {
        touching[v].push_back(b);
      }
    }
    std::vector<char> corner(static_cast<std::size_t>(m.num_vertices()), 0);
    if (corners == BoundaryCorners::Split)
    {
      const double cos_tol = std::cos(kCornerAngle);
      for (std::size_t v = 0; v < touching.size(); ++v)
      {
        const auto &t = touching[v];
        for (std::size_t i = 0; i < t.size() && !corner[v]; ++i)
        {
          for (std::size_t j = i + 1; j < t.size(); ++j)
          {
            if (m.outward_normal(t[i]).dot(m.outward_normal(t[j])) < cos_tol)
            {
              corner[v] = 1;
              break;
            }
          }
        }
      }
    }
    std::vector<int> vertex_dof(static_cast<std::size_t>(m.num_vertices()), -1);
    std::vector<std::array<int, 2>> end_dof(static_cast<std::size_t>(nb));
    int next = 0;
    for (int b = 0; b < nb; ++b)
    {
      const auto &ed = m.edges[static_cast<std::size_t>(m.boundary_edges[b].edge)];
      for (int k = 0; k < 2; ++k)
      {
        const int v = ed[k];
        if (corner[v])
        {
          end_dof[b][k] = next++;
        }
        else
        {
          if (vertex_dof[v] < 0)
          {
            vertex_dof[v] = next++;
          }
          end_dof[b][k] = vertex_dof[v];
        }
      }
    }
    for (int b = 0; b < nb; ++b)
    {
      auto &dofs = edge_dofs_[b];
      dofs.push_back(end_dof[b][0]);
      for (int j = 1; j < order_; ++j)
      {
        dofs.push_back(next + b * (order_ - 1) + (j - 1));
      }
      dofs.push_back(end_dof[b][1]);
    }
    ndofs_ = next + nb * (order_ - 1);
  }

  std::vector<Eigen::Triplet<double>> trip;
  const QuadratureRule rule = edge_rule(2 * order_ + 2);
  for (int b = 0; b < nb; ++b)
  {
    const double len = m.edge_length(m.boundary_edges[b].edge);
    const auto &dofs = edge_dofs(b);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Eigen::VectorXd psi = eval_basis(rule.points[q].x());
      for (int i = 0; i <= order_; ++i)
      {
        for (int j = 0; j <= order_; ++j)
        {
          trip.emplace_back(dofs[i], dofs[j], rule.weights[q] * len * psi[i] * psi[j]);
        }
      }
    }
  }
  mass_.resize(ndofs_, ndofs_);
  mass_.setFromTriplets(trip.begin(), trip.end());
  auto solver = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(mass_);
  PFEM_THROW_IF(solver->info() != Eigen::Success, SolverFailure,
                "boundary mass matrix factorization failed");
  mass_solver_ = std::move(solver);
}

std::string BoundarySpace::name() const
{
  return std::string(kind_ == FamilyKind::DG ? "DG_" : "CG_") + std::to_string(order_);
}

Eigen::VectorXd BoundarySpace::eval_basis(double s) const { return lagrange_1d(order_, s); }

Point2 BoundarySpace::edge_point(int b, double s) const
{
  const Mesh &m = *mesh_;
  const auto &ed = m.edges[static_cast<std::size_t>(m.boundary_edges[static_cast<std::size_t>(b)].edge)];
  return (1.0 - s) * m.vertices[ed[0]] + s * m.vertices[ed[1]];
}

Eigen::VectorXd BoundarySpace::interpolate(const BoundaryField &f) const
{
  const Mesh &m = *mesh_;
  const QuadratureRule rule = edge_rule(std::min(kMaxEdgeDegree, 2 * order_ + 10));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ndofs_);
  for (int b = 0; b < num_edges(); ++b)
  {
    const double len = m.edge_length(m.boundary_edges[static_cast<std::size_t>(b)].edge);
    const Point2 n = m.outward_normal(b);
    const auto &dofs = edge_dofs(b);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const double s = rule.points[q].x();
      const double val = f(edge_point(b, s), n);
      const Eigen::VectorXd psi = eval_basis(s);
      for (int i = 0; i <= order_; ++i)
      {
        rhs[dofs[i]] += rule.weights[q] * len * val * psi[i];
      }
    }
  }
  return mass_solver_->solve(rhs);
}

FunctionSpace build_space(std::shared_ptr<const Mesh> mesh, const ElementFamily &family)
{
  return FunctionSpace(std::move(mesh), family);
}

BoundarySpace build_boundary_space(std::shared_ptr<const Mesh> mesh, FamilyKind kind, int order,
                                   BoundaryCorners corners)
{
  return BoundarySpace(std::move(mesh), kind, order, corners);
}

}  // namespace pfem
