// SPDX-License-Identifier: Apache-2.0

#include "pfem/assembly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"

namespace pfem
{

namespace
{

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets &t)
{
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void scatter(Triplets &t, const std::vector<int> &rows, const std::vector<int> &cols,
             const Eigen::MatrixXd &local)
{
  for (Eigen::Index i = 0; i < local.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < local.cols(); ++j)
    {
      if (local(i, j) != 0.0)
      {
        t.emplace_back(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)],
                       local(i, j));
      }
    }
  }
}

int cell_degree(int requested, int fallback)
{
  const int d = requested > 0 ? requested : fallback;
  return std::clamp(d, 1, kMaxTriangleDegree);
}

int boundary_degree(int requested, int fallback)
{
  const int d = requested > 0 ? requested : fallback;
  return std::clamp(d, 1, kMaxEdgeDegree);
}

void require_same_mesh(const FunctionSpace &a, const FunctionSpace &b)
{
  PFEM_THROW_IF(&a.mesh() != &b.mesh(), InvalidArgument,
                "spaces are defined on different meshes");
}

// Values of a space on the boundary quadrature points of boundary edge b.
struct EdgeSample
{
  std::vector<Point2> x;
  std::vector<double> s;
  std::vector<double> w;  // includes edge length
  CellBasis basis;
};

EdgeSample sample_edge(const FunctionSpace *space, const BoundarySpace *bs, const Mesh &m, int b,
                       const QuadratureRule &rule)
{
  EdgeSample out;
  const auto &be = m.boundary_edges[static_cast<std::size_t>(b)];
  const auto &ed = m.edges[static_cast<std::size_t>(be.edge)];
  const double len = m.edge_length(be.edge);
  std::vector<Eigen::Vector2d> ref;
  const CellMap map = cell_map(m, be.cell);
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const double s = rule.points[q].x();
    const Point2 x = bs ? bs->edge_point(b, s)
                        : Point2((1.0 - s) * m.vertices[ed[0]] + s * m.vertices[ed[1]]);
    out.x.push_back(x);
    out.s.push_back(s);
    out.w.push_back(rule.weights[q] * len);
    ref.push_back(map.to_reference(x));
  }
  if (space)
  {
    out.basis = space->cell_basis(space->tabulate(ref), map, be.cell);
  }
  return out;
}

// Local dofs with a nonzero trace on local edge `e`: closure nodes for Lagrange
// elements, the edge moments for H(div) elements. Other rows are exactly zero.
std::vector<bool> trace_mask(const ReferenceElement &elem, int components, int e)
{
  const int n = elem.dof_count();
  std::vector<bool> keep(static_cast<std::size_t>(n * components), false);
  auto mark = [&](int j) {
    for (int c = 0; c < components; ++c)
    {
      keep[static_cast<std::size_t>(components * j + c)] = true;
    }
  };
  if (elem.family().kind == FamilyKind::DG && elem.family().order == 0)
  {
    std::fill(keep.begin(), keep.end(), true);
    return keep;
  }
  for (int j : elem.edge_dofs(e))
  {
    mark(j);
  }
  if (!elem.is_vector())
  {
    for (int v : reference_edge_vertices(e))
    {
      for (int j : elem.vertex_dofs(v))
      {
        mark(j);
      }
    }
  }
  return keep;
}

void apply_row_mask(Eigen::MatrixXd &local, const std::vector<bool> &keep)
{
  for (Eigen::Index i = 0; i < local.rows(); ++i)
  {
    if (!keep[static_cast<std::size_t>(i)])
    {
      local.row(i).setZero();
    }
  }
}

}  // namespace

std::string to_string(Causality c)
{
  return c == Causality::Neumann ? "neumann" : "dirichlet";
}

Causality parse_causality(const std::string &text)
{
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "neumann")
  {
    return Causality::Neumann;
  }
  if (s == "dirichlet")
  {
    return Causality::Dirichlet;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown causality '" + text + "' (neumann, dirichlet)");
}

int default_quadrature_degree(int max_polynomial_degree)
{
  return std::clamp(2 * max_polynomial_degree + 2, 1, kMaxTriangleDegree);
}

SparseMatrix assemble_mass_p(const FunctionSpace &space_p,
                             const std::function<double(const Point2 &)> &rho, int degree)
{
  PFEM_THROW_IF(space_p.is_vector(), ShapeMismatch, "p-space must be scalar");
  const Mesh &m = space_p.mesh();
  const QuadratureRule rule =
      triangle_rule(cell_degree(degree, default_quadrature_degree(space_p.family().polynomial_degree())));
  const ReferenceTable table = space_p.tabulate(rule.points);
  Triplets t;
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellMap map = cell_map(m, c);
    const CellBasis cb = space_p.cell_basis(table, map, c);
    Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      w[static_cast<Eigen::Index>(q)] =
          rule.weights[q] * std::abs(map.det) * rho(map.to_physical(rule.points[q]));
    }
    const Eigen::MatrixXd local = cb.value.transpose() * w.asDiagonal() * cb.value;
    scatter(t, space_p.cell_dofs(c), space_p.cell_dofs(c), local);
  }
  return from_triplets(space_p.dim(), space_p.dim(), t);
}

SparseMatrix assemble_mass_q(const FunctionSpace &space_q,
                             const std::function<Eigen::Matrix2d(const Point2 &)> &T_inverse,
                             int degree)
{
  PFEM_THROW_IF(!space_q.is_vector(), ShapeMismatch, "q-space must be vector valued");
  const Mesh &m = space_q.mesh();
  const QuadratureRule rule =
      triangle_rule(cell_degree(degree, default_quadrature_degree(space_q.family().polynomial_degree())));
  const ReferenceTable table = space_q.tabulate(rule.points);
  Triplets t;
  const auto nq = static_cast<Eigen::Index>(rule.size());
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellMap map = cell_map(m, c);
    const CellBasis cb = space_q.cell_basis(table, map, c);
    Eigen::VectorXd a(nq), b(nq), d(nq);
    for (Eigen::Index q = 0; q < nq; ++q)
    {
      const auto qi = static_cast<std::size_t>(q);
      const double w = rule.weights[qi] * std::abs(map.det);
      const Eigen::Matrix2d Ti = T_inverse(map.to_physical(rule.points[qi]));
      a[q] = w * Ti(0, 0);
      b[q] = w * 0.5 * (Ti(0, 1) + Ti(1, 0));
      d[q] = w * Ti(1, 1);
    }
    const Eigen::MatrixXd local = cb.vx.transpose() * a.asDiagonal() * cb.vx +
                                  cb.vx.transpose() * b.asDiagonal() * cb.vy +
                                  cb.vy.transpose() * b.asDiagonal() * cb.vx +
                                  cb.vy.transpose() * d.asDiagonal() * cb.vy;
    scatter(t, space_q.cell_dofs(c), space_q.cell_dofs(c), local);
  }
  return from_triplets(space_q.dim(), space_q.dim(), t);
}

SparseMatrix assemble_D(const FunctionSpace &space_q, const FunctionSpace &space_p, int degree)
{
  require_same_mesh(space_q, space_p);
  PFEM_THROW_IF(!space_q.is_vector() || space_p.is_vector(), ShapeMismatch,
                "D needs a vector q-space and a scalar p-space");
  PFEM_THROW_IF(space_p.family().kind == FamilyKind::DG && space_p.family().order == 0,
                InvalidCombination,
                "p-space DG_0 has no gradient; Neumann causality needs a differentiable p-space");
  const Mesh &m = space_q.mesh();
  const int pd = std::max(space_q.family().polynomial_degree(), space_p.family().polynomial_degree());
  const QuadratureRule rule = triangle_rule(cell_degree(degree, default_quadrature_degree(pd)));
  const ReferenceTable tq = space_q.tabulate(rule.points);
  const ReferenceTable tp = space_p.tabulate(rule.points);
  Triplets t;
  Eigen::VectorXd w0(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    w0[static_cast<Eigen::Index>(q)] = rule.weights[q];
  }
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellMap map = cell_map(m, c);
    const CellBasis bq = space_q.cell_basis(tq, map, c);
    const CellBasis bp = space_p.cell_basis(tp, map, c);
    const Eigen::VectorXd w = w0 * std::abs(map.det);
    const Eigen::MatrixXd local =
        bq.vx.transpose() * w.asDiagonal() * bp.grad_x + bq.vy.transpose() * w.asDiagonal() * bp.grad_y;
    scatter(t, space_q.cell_dofs(c), space_p.cell_dofs(c), local);
  }
  return from_triplets(space_q.dim(), space_p.dim(), t);
}

SparseMatrix assemble_B(const FunctionSpace &space_p, const BoundarySpace &boundary, int degree)
{
  PFEM_THROW_IF(space_p.is_vector(), ShapeMismatch, "B needs a scalar p-space");
  const Mesh &m = space_p.mesh();
  const QuadratureRule rule = edge_rule(
      boundary_degree(degree, space_p.family().polynomial_degree() + boundary.order() + 2));
  Triplets t;
  for (int b = 0; b < boundary.num_edges(); ++b)
  {
    const EdgeSample es = sample_edge(&space_p, &boundary, m, b, rule);
    const int bc = m.boundary_edges[static_cast<std::size_t>(b)].cell;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(es.basis.value.cols(), boundary.order() + 1);
    for (std::size_t q = 0; q < es.w.size(); ++q)
    {
      const Eigen::VectorXd psi = boundary.eval_basis(es.s[q]);
      local += es.w[q] * es.basis.value.row(static_cast<Eigen::Index>(q)).transpose() * psi.transpose();
    }
    apply_row_mask(local, trace_mask(space_p.element(), space_p.components(),
                                     m.boundary_edges[static_cast<std::size_t>(b)].local_index));
    scatter(t, space_p.cell_dofs(bc), boundary.edge_dofs(b), local);
  }
  return from_triplets(space_p.dim(), boundary.dim(), t);
}

SparseMatrix assemble_admittance(const BoundarySpace &boundary, const BoundaryCoefficient &Y,
                                 double t_eval, int degree)
{
  const Mesh &m = boundary.mesh();
  const QuadratureRule rule = edge_rule(boundary_degree(degree, 2 * boundary.order() + 6));
  Triplets t;
  for (int b = 0; b < boundary.num_edges(); ++b)
  {
    const EdgeSample es = sample_edge(nullptr, &boundary, m, b, rule);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(boundary.order() + 1, boundary.order() + 1);
    for (std::size_t q = 0; q < es.w.size(); ++q)
    {
      const Eigen::VectorXd psi = boundary.eval_basis(es.s[q]);
      const double y = Y ? Y(t_eval, es.x[q]) : 1.0;
      local += es.w[q] * y * psi * psi.transpose();
    }
    scatter(t, boundary.edge_dofs(b), boundary.edge_dofs(b), local);
  }
  return from_triplets(boundary.dim(), boundary.dim(), t);
}

SparseMatrix assemble_M_boundary(const BoundarySpace &boundary, int degree)
{
  const Mesh &m = boundary.mesh();
  const QuadratureRule rule = edge_rule(boundary_degree(degree, 2 * boundary.order() + 2));
  Triplets t;
  for (int b = 0; b < boundary.num_edges(); ++b)
  {
    const EdgeSample es = sample_edge(nullptr, &boundary, m, b, rule);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(boundary.order() + 1, boundary.order() + 1);
    for (std::size_t q = 0; q < es.w.size(); ++q)
    {
      const Eigen::VectorXd psi = boundary.eval_basis(es.s[q]);
      local += es.w[q] * psi * psi.transpose();
    }
    scatter(t, boundary.edge_dofs(b), boundary.edge_dofs(b), local);
  }
  return from_triplets(boundary.dim(), boundary.dim(), t);
}

DirichletBlocks assemble_dirichlet_blocks(const FunctionSpace &space_q, const FunctionSpace &space_p,
                                          const BoundarySpace &boundary, int degree)
{
  require_same_mesh(space_q, space_p);
  PFEM_THROW_IF(!space_q.family().is_hdiv(), InvalidCombination,
                "Dirichlet causality needs an H(div) q-space with a normal trace, got " +
                    space_q.family().name());
  PFEM_THROW_IF(space_p.is_vector(), ShapeMismatch, "p-space must be scalar");
  const Mesh &m = space_q.mesh();
  const int pd = std::max(space_q.family().polynomial_degree(), space_p.family().polynomial_degree());
  const QuadratureRule rule = triangle_rule(cell_degree(degree, default_quadrature_degree(pd)));
  const ReferenceTable tq = space_q.tabulate(rule.points);
  const ReferenceTable tp = space_p.tabulate(rule.points);
  Triplets td;
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const CellMap map = cell_map(m, c);
    const CellBasis bq = space_q.cell_basis(tq, map, c);
    const CellBasis bp = space_p.cell_basis(tp, map, c);
    Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      w[static_cast<Eigen::Index>(q)] = rule.weights[q] * std::abs(map.det);
    }
    const Eigen::MatrixXd local = -(bq.div.transpose() * w.asDiagonal() * bp.value);
    scatter(td, space_q.cell_dofs(c), space_p.cell_dofs(c), local);
  }

  const QuadratureRule erule = edge_rule(
      boundary_degree(degree, space_q.family().polynomial_degree() + boundary.order() + 2));
  Triplets tb;
  for (int b = 0; b < boundary.num_edges(); ++b)
  {
    const EdgeSample es = sample_edge(&space_q, &boundary, m, b, erule);
    const Point2 n = m.outward_normal(b);
    const int bc = m.boundary_edges[static_cast<std::size_t>(b)].cell;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(boundary.order() + 1, es.basis.vx.cols());
    for (std::size_t q = 0; q < es.w.size(); ++q)
    {
      const auto qi = static_cast<Eigen::Index>(q);
      const Eigen::VectorXd psi = boundary.eval_basis(es.s[q]);
      const Eigen::RowVectorXd gn = n.x() * es.basis.vx.row(qi) + n.y() * es.basis.vy.row(qi);
      local += es.w[q] * psi * gn;
    }
    Eigen::MatrixXd lt = local.transpose();
    apply_row_mask(lt, trace_mask(space_q.element(), space_q.components(),
                                  m.boundary_edges[static_cast<std::size_t>(b)].local_index));
    local = lt.transpose();
    scatter(tb, boundary.edge_dofs(b), space_q.cell_dofs(bc), local);
  }
  return {from_triplets(space_q.dim(), space_p.dim(), td),
          from_triplets(boundary.dim(), space_q.dim(), tb)};
}

SparseMatrix assemble_boundary_pairing(const FunctionSpace &space_q, const FunctionSpace &space_p,
                                       int degree)
{
  require_same_mesh(space_q, space_p);
  PFEM_THROW_IF(!space_q.is_vector() || space_p.is_vector(), ShapeMismatch,
                "pairing needs a vector q-space and a scalar p-space");
  const Mesh &m = space_q.mesh();
  const QuadratureRule rule = edge_rule(boundary_degree(
      degree, space_q.family().polynomial_degree() + space_p.family().polynomial_degree() + 2));
  Triplets t;
  for (int b = 0; b < static_cast<int>(m.boundary_edges.size()); ++b)
  {
    const EdgeSample eq = sample_edge(&space_q, nullptr, m, b, rule);
    const EdgeSample ep = sample_edge(&space_p, nullptr, m, b, rule);
    const Point2 n = m.outward_normal(b);
    const int bc = m.boundary_edges[static_cast<std::size_t>(b)].cell;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(eq.basis.vx.cols(), ep.basis.value.cols());
    for (std::size_t q = 0; q < eq.w.size(); ++q)
    {
      const auto qi = static_cast<Eigen::Index>(q);
      const Eigen::RowVectorXd gn = n.x() * eq.basis.vx.row(qi) + n.y() * eq.basis.vy.row(qi);
      local += eq.w[q] * gn.transpose() * ep.basis.value.row(qi);
    }
    const int le = m.boundary_edges[static_cast<std::size_t>(b)].local_index;
    apply_row_mask(local, trace_mask(space_q.element(), space_q.components(), le));
    Eigen::MatrixXd lt = local.transpose();
    apply_row_mask(lt, trace_mask(space_p.element(), space_p.components(), le));
    local = lt.transpose();
    scatter(t, space_q.cell_dofs(bc), space_p.cell_dofs(bc), local);
  }
  return from_triplets(space_q.dim(), space_p.dim(), t);
}

SparseMatrix PHSystem::mass() const
{
  Triplets t;
  for (int k = 0; k < M_q.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(M_q, k); it; ++it)
    {
      t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int k = 0; k < M_p.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(M_p, k); it; ++it)
    {
      t.emplace_back(n_q() + it.row(), n_q() + it.col(), it.value());
    }
  }
  return from_triplets(n_state(), n_state(), t);
}

SparseMatrix PHSystem::structure() const
{
  Triplets t;
  for (int k = 0; k < coupling.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(coupling, k); it; ++it)
    {
      t.emplace_back(it.row(), n_q() + it.col(), it.value());
      t.emplace_back(n_q() + it.col(), it.row(), -it.value());
    }
  }
  return from_triplets(n_state(), n_state(), t);
}

SparseMatrix PHSystem::input_operator() const
{
  Triplets t;
  for (int k = 0; k < input.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(input, k); it; ++it)
    {
      if (causality == Causality::Neumann)
      {
        t.emplace_back(n_q() + it.row(), it.col(), it.value());
      }
      else
      {
        t.emplace_back(it.col(), it.row(), it.value());
      }
    }
  }
  return from_triplets(n_state(), n_b(), t);
}

SparseMatrix PHSystem::extended_structure() const
{
  const int n = n_state() + n_b();
  Triplets t;
  const SparseMatrix J = structure();
  for (int k = 0; k < J.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(J, k); it; ++it)
    {
      t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  const SparseMatrix G = input_operator();
  for (int k = 0; k < G.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(G, k); it; ++it)
    {
      t.emplace_back(it.row(), n_state() + it.col(), it.value());
      t.emplace_back(n_state() + it.col(), it.row(), -it.value());
    }
  }
  return from_triplets(n, n, t);
}

PHSystem assemble_system(std::shared_ptr<const FunctionSpace> space_q,
                         std::shared_ptr<const FunctionSpace> space_p,
                         std::shared_ptr<const BoundarySpace> boundary, const Material &material,
                         Causality causality, int quadrature_degree)
{
  PFEM_THROW_IF(!space_q || !space_p || !boundary, InvalidArgument, "assemble_system: null space");
  require_same_mesh(*space_q, *space_p);
  PFEM_THROW_IF(&space_q->mesh() != &boundary->mesh(), InvalidArgument,
                "boundary space lives on a different mesh");

  PHSystem sys;
  sys.causality = causality;
  sys.space_q = space_q;
  sys.space_p = space_p;
  sys.boundary = boundary;
  sys.material = material;
  const int pd = std::max({space_q->family().polynomial_degree(), space_p->family().polynomial_degree(),
                           boundary->order()});
  const int needed = 2 * pd;
  sys.quadrature_degree = quadrature_degree > 0 ? quadrature_degree : default_quadrature_degree(pd);
  PFEM_THROW_IF(sys.quadrature_degree > kMaxTriangleDegree, UnsupportedDegree,
                "quadrature degree " + std::to_string(sys.quadrature_degree) + " exceeds " +
                    std::to_string(kMaxTriangleDegree));
  if (sys.quadrature_degree < needed)
  {
    sys.warnings.push_back("quadrature: degree " + std::to_string(sys.quadrature_degree) +
                           " is below " + std::to_string(needed) +
                           " needed for exact constant-coefficient mass matrices");
  }

  const int qd = sys.quadrature_degree;
  sys.M_p = assemble_mass_p(*space_p, material.rho, qd);
  sys.M_q = assemble_mass_q(*space_q, [&](const Point2 &x) { return invert_T(material.T(x)); }, qd);
  sys.M_b = assemble_M_boundary(*boundary);

  if (causality == Causality::Neumann)
  {
    if (space_p->conformity() != Conformity::H1)
    {
      sys.warnings.push_back("conformity: p-space " + space_p->family().name() +
                             " is not H1-conforming; Neumann causality uses a cellwise gradient "
                             "and is not expected to converge");
    }
    sys.coupling = assemble_D(*space_q, *space_p, qd);
    sys.input = assemble_B(*space_p, *boundary);
  }
  else
  {
    DirichletBlocks blocks = assemble_dirichlet_blocks(*space_q, *space_p, *boundary, qd);
    sys.coupling = std::move(blocks.D_tilde);
    sys.input = std::move(blocks.B_tilde);
  }
  return sys;
}

void write_matrix(std::ostream &os, const SparseMatrix &m)
{
  os.precision(17);
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace pfem
