// SPDX-License-Identifier: Apache-2.0

#include "pfem/elements.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "pfem/error.hpp"
#include "pfem/quadrature.hpp"

namespace pfem
{

namespace
{

std::vector<std::array<int, 2>> monomials_up_to(int degree)
{
  std::vector<std::array<int, 2>> m;
  for (int d = 0; d <= degree; ++d)
  {
    for (int b = 0; b <= d; ++b)
    {
      m.push_back({d - b, b});
    }
  }
  return m;
}

int monomial_index(const std::vector<std::array<int, 2>> &monos, int a, int b)
{
  const auto it = std::find(monos.begin(), monos.end(), std::array<int, 2>{a, b});
  return static_cast<int>(it - monos.begin());
}

double ipow(double x, int n)
{
  double r = 1.0;
  for (int i = 0; i < n; ++i)
  {
    r *= x;
  }
  return r;
}

void eval_monomials(const std::vector<std::array<int, 2>> &monos, const Eigen::Vector2d &p,
                    Eigen::VectorXd &value, Eigen::VectorXd &dxi, Eigen::VectorXd &deta)
{
  const auto n = static_cast<Eigen::Index>(monos.size());
  value.resize(n);
  dxi.resize(n);
  deta.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    const auto [a, b] = monos[static_cast<std::size_t>(k)];
    value[k] = ipow(p.x(), a) * ipow(p.y(), b);
    dxi[k] = a > 0 ? a * ipow(p.x(), a - 1) * ipow(p.y(), b) : 0.0;
    deta[k] = b > 0 ? b * ipow(p.x(), a) * ipow(p.y(), b - 1) : 0.0;
  }
}

}  // namespace

ElementFamily ElementFamily::parse(const std::string &text, ValueShape shape)
{
  std::string letters, digits;
  for (char ch : text)
  {
    if (std::isalpha(static_cast<unsigned char>(ch)))
    {
      letters.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    }
    else if (std::isdigit(static_cast<unsigned char>(ch)))
    {
      digits.push_back(ch);
    }
    else if (ch != '_')
    {
      throw Error(ErrorKind::InvalidArgument, "cannot parse element family '" + text + "'");
    }
  }
  PFEM_THROW_IF(digits.empty(), InvalidArgument,
                "element family '" + text + "' has no order");
  ElementFamily f;
  f.order = std::stoi(digits);
  f.shape = shape;
  if (letters == "CG" || letters == "P")
  {
    f.kind = FamilyKind::CG;
  }
  else if (letters == "DG")
  {
    f.kind = FamilyKind::DG;
  }
  else if (letters == "RT")
  {
    f.kind = FamilyKind::RT;
    f.shape = ValueShape::Vector2;
  }
  else if (letters == "BDM")
  {
    f.kind = FamilyKind::BDM;
    f.shape = ValueShape::Vector2;
  }
  else
  {
    throw Error(ErrorKind::InvalidArgument, "unknown element family '" + text + "'");
  }
  return f;
}

std::string ElementFamily::name() const
{
  std::string s;
  switch (kind)
  {
    case FamilyKind::CG: s = "CG"; break;
    case FamilyKind::DG: s = "DG"; break;
    case FamilyKind::RT: s = "RT"; break;
    case FamilyKind::BDM: s = "BDM"; break;
  }
  return s + "_" + std::to_string(order);
}

void validate_family(const ElementFamily &family)
{
  bool ok = false;
  switch (family.kind)
  {
    case FamilyKind::CG: ok = family.order >= 1 && family.order <= 3; break;
    case FamilyKind::DG: ok = family.order >= 0 && family.order <= 3; break;
    case FamilyKind::RT:
    case FamilyKind::BDM:
      ok = family.order >= 1 && family.order <= 2 && family.shape == ValueShape::Vector2;
      break;
  }
  PFEM_THROW_IF(!ok, InvalidArgument, "element family " + family.name() + " not implemented");
}

Eigen::Vector2d reference_vertex(int i)
{
  switch (i)
  {
    case 0: return {0.0, 0.0};
    case 1: return {1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

std::array<int, 2> reference_edge_vertices(int i) { return {(i + 1) % 3, (i + 2) % 3}; }

double shifted_legendre(int n, double s)
{
  const double x = 2.0 * s - 1.0;
  double prev = 1.0, p = x;
  if (n == 0)
  {
    return 1.0;
  }
  for (int k = 2; k <= n; ++k)
  {
    const double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * prev) / k;
    prev = p;
    p = next;
  }
  return p;
}

ReferenceElement::ReferenceElement(const ElementFamily &family) : family_(family)
{
  validate_family(family_);
  if (family_.is_lagrange())
  {
    build_lagrange();
  }
  else
  {
    build_hdiv();
  }
}

void ReferenceElement::build_lagrange()
{
  const int k = family_.order;
  monomials_ = monomials_up_to(k);

  auto point_dof = [&](DofKind kind, int entity, int index, const Eigen::Vector2d &p)
  { functionals_.push_back({kind, entity, index, {p}, {1.0}, {}}); };

  if (k == 0)
  {
    interior_dofs_.push_back(0);
    point_dof(DofKind::InteriorPointValue, 0, 0, Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0));
  }
  else
  {
    for (int v = 0; v < 3; ++v)
    {
      vertex_dofs_[v].push_back(dof_count());
      point_dof(DofKind::VertexValue, v, 0, reference_vertex(v));
    }
    for (int e = 0; e < 3; ++e)
    {
      const auto [a, b] = reference_edge_vertices(e);
      for (int j = 1; j < k; ++j)
      {
        const double s = static_cast<double>(j) / k;
        edge_dofs_[e].push_back(dof_count());
        point_dof(DofKind::EdgePointValue, e, j - 1,
                  (1.0 - s) * reference_vertex(a) + s * reference_vertex(b));
      }
    }
    int idx = 0;
    for (int j = 1; j < k; ++j)
    {
      for (int i = 1; i + j < k; ++i)
      {
        interior_dofs_.push_back(dof_count());
        point_dof(DofKind::InteriorPointValue, 0, idx++,
                  Eigen::Vector2d(static_cast<double>(i) / k, static_cast<double>(j) / k));
      }
    }
  }

  const int n = dof_count();
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
  {
    Eigen::VectorXd m, dx, dy;
    eval_monomials(monomials_, functionals_[i].points[0], m, dx, dy);
    V.row(i) = m.transpose();
  }
  coeff_x_ = V.fullPivLu().inverse();
}

void ReferenceElement::build_hdiv()
{
  const int k = family_.order;
  const bool rt = family_.kind == FamilyKind::RT;
  monomials_ = monomials_up_to(k);
  const auto nm = static_cast<Eigen::Index>(monomials_.size());

  // Prebasis columns: RT_k = (P_{k-1})^2 + x P~_{k-1}, BDM_k = (P_k)^2.
  std::vector<Eigen::VectorXd> px, py;
  const int full_degree = rt ? k - 1 : k;
  for (int d = 0; d <= full_degree; ++d)
  {
    for (int b = 0; b <= d; ++b)
    {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(nm);
      e[monomial_index(monomials_, d - b, b)] = 1.0;
      px.push_back(e);
      py.push_back(Eigen::VectorXd::Zero(nm));
      px.push_back(Eigen::VectorXd::Zero(nm));
      py.push_back(e);
    }
  }
  if (rt)
  {
    const int d = k - 1;
    for (int b = 0; b <= d; ++b)
    {
      Eigen::VectorXd ex = Eigen::VectorXd::Zero(nm), ey = Eigen::VectorXd::Zero(nm);
      ex[monomial_index(monomials_, d - b + 1, b)] = 1.0;
      ey[monomial_index(monomials_, d - b, b + 1)] = 1.0;
      px.push_back(ex);
      py.push_back(ey);
    }
  }

  // Edge moments against shifted Legendre polynomials, outward unit normal.
  const int edge_moments = rt ? k : k + 1;
  const QuadratureRule er = edge_rule(2 * k + 2);
  for (int e = 0; e < 3; ++e)
  {
    const auto [a, b] = reference_edge_vertices(e);
    const Eigen::Vector2d pa = reference_vertex(a), pb = reference_vertex(b);
    const Eigen::Vector2d t = pb - pa;
    const double length = t.norm();
    const Eigen::Vector2d normal = Eigen::Vector2d(t.y(), -t.x()) / length;
    for (int m = 0; m < edge_moments; ++m)
    {
      DofFunctional f{DofKind::EdgeMoment, e, m, {}, {}, {}};
      for (std::size_t q = 0; q < er.size(); ++q)
      {
        const double s = er.points[q].x();
        f.points.push_back((1.0 - s) * pa + s * pb);
        f.weights.push_back(er.weights[q] * length * shifted_legendre(m, s));
        f.directions.push_back(normal);
      }
      edge_dofs_[e].push_back(dof_count());
      functionals_.push_back(std::move(f));
    }
  }

  // Interior moments: (P_0)^2 for RT_2, lowest-order Nedelec for BDM_2.
  if (k == 2)
  {
    const QuadratureRule tr = triangle_rule(2 * k + 2);
    std::vector<std::function<Eigen::Vector2d(const Eigen::Vector2d &)>> tests = {
        [](const Eigen::Vector2d &) { return Eigen::Vector2d(1.0, 0.0); },
        [](const Eigen::Vector2d &) { return Eigen::Vector2d(0.0, 1.0); }};
    if (!rt)
    {
      tests.push_back([](const Eigen::Vector2d &p) { return Eigen::Vector2d(-p.y(), p.x()); });
    }
    int idx = 0;
    for (const auto &w : tests)
    {
      DofFunctional f{DofKind::InteriorMoment, 0, idx++, {}, {}, {}};
      for (std::size_t q = 0; q < tr.size(); ++q)
      {
        f.points.push_back(tr.points[q]);
        f.weights.push_back(tr.weights[q]);
        f.directions.push_back(w(tr.points[q]));
      }
      interior_dofs_.push_back(dof_count());
      functionals_.push_back(std::move(f));
    }
  }

  const int n = dof_count();
  PFEM_THROW_IF(static_cast<int>(px.size()) != n, InvalidArgument,
                "prebasis dimension mismatch for " + family_.name());
  Eigen::MatrixXd Px(nm, n), Py(nm, n);
  for (int j = 0; j < n; ++j)
  {
    Px.col(j) = px[static_cast<std::size_t>(j)];
    Py.col(j) = py[static_cast<std::size_t>(j)];
  }
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
  {
    const auto &f = functionals_[static_cast<std::size_t>(i)];
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    for (std::size_t q = 0; q < f.points.size(); ++q)
    {
      Eigen::VectorXd m, dx, dy;
      eval_monomials(monomials_, f.points[q], m, dx, dy);
      row += f.weights[q] * (f.directions[q].x() * (m.transpose() * Px) +
                             f.directions[q].y() * (m.transpose() * Py));
    }
    V.row(i) = row;
  }
  const Eigen::MatrixXd Vinv = V.fullPivLu().inverse();
  coeff_x_ = Px * Vinv;
  coeff_y_ = Py * Vinv;
}

ScalarBasisValues ReferenceElement::eval_scalar(const Eigen::Vector2d &p) const
{
  PFEM_THROW_IF(is_vector(), FamilyMismatch,
                "eval_scalar: " + family_.name() + " is not a scalar family");
  Eigen::VectorXd m, dx, dy;
  eval_monomials(monomials_, p, m, dx, dy);
  ScalarBasisValues out;
  out.values = coeff_x_.transpose() * m;
  out.gradients.resize(dof_count(), 2);
  out.gradients.col(0) = coeff_x_.transpose() * dx;
  out.gradients.col(1) = coeff_x_.transpose() * dy;
  return out;
}

HdivBasisValues ReferenceElement::eval_hdiv(const Eigen::Vector2d &p) const
{
  PFEM_THROW_IF(!is_vector(), FamilyMismatch,
                "eval_hdiv: " + family_.name() + " is not an H(div) family");
  Eigen::VectorXd m, dx, dy;
  eval_monomials(monomials_, p, m, dx, dy);
  HdivBasisValues out;
  out.values.resize(dof_count(), 2);
  out.values.col(0) = coeff_x_.transpose() * m;
  out.values.col(1) = coeff_y_.transpose() * m;
  out.divergences = coeff_x_.transpose() * dx + coeff_y_.transpose() * dy;
  return out;
}

double ReferenceElement::apply_scalar_functional(
    int i, const std::function<double(const Eigen::Vector2d &)> &f) const
{
  const auto &fn = functionals_[static_cast<std::size_t>(i)];
  double s = 0.0;
  for (std::size_t q = 0; q < fn.points.size(); ++q)
  {
    s += fn.weights[q] * f(fn.points[q]);
  }
  return s;
}

double ReferenceElement::apply_vector_functional(
    int i, const std::function<Eigen::Vector2d(const Eigen::Vector2d &)> &f) const
{
  const auto &fn = functionals_[static_cast<std::size_t>(i)];
  double s = 0.0;
  for (std::size_t q = 0; q < fn.points.size(); ++q)
  {
    s += fn.weights[q] * fn.directions[q].dot(f(fn.points[q]));
  }
  return s;
}

CellMap make_cell_map(const Point2 &v0, const Point2 &v1, const Point2 &v2)
{
  CellMap m;
  m.B.col(0) = v1 - v0;
  m.B.col(1) = v2 - v0;
  m.b = v0;
  m.det = m.B.determinant();
  PFEM_THROW_IF(m.det == 0.0, DegenerateCell, "cell map is singular");
  m.B_inv = m.B.inverse();
  return m;
}

CellMap cell_map(const Mesh &mesh, int cell)
{
  const auto &v = mesh.cells[static_cast<std::size_t>(cell)];
  return make_cell_map(mesh.vertices[v[0]], mesh.vertices[v[1]], mesh.vertices[v[2]]);
}

Eigen::VectorXd interpolate_local_scalar(const ReferenceElement &elem,
                                         const std::function<double(const Point2 &)> &f,
                                         const CellMap &map)
{
  PFEM_THROW_IF(elem.is_vector(), FamilyMismatch,
                "interpolate_local_scalar: vector element " + elem.family().name());
  Eigen::VectorXd c(elem.dof_count());
  for (int i = 0; i < elem.dof_count(); ++i)
  {
    c[i] = elem.apply_scalar_functional(
        i, [&](const Eigen::Vector2d &ref) { return f(map.to_physical(ref)); });
  }
  return c;
}

Eigen::VectorXd interpolate_local_vector(const ReferenceElement &elem,
                                         const std::function<Eigen::Vector2d(const Point2 &)> &f,
                                         const CellMap &map)
{
  PFEM_THROW_IF(!elem.is_vector(), FamilyMismatch,
                "interpolate_local_vector: scalar element " + elem.family().name());
  Eigen::VectorXd c(elem.dof_count());
  for (int i = 0; i < elem.dof_count(); ++i)
  {
    c[i] = elem.apply_vector_functional(i, [&](const Eigen::Vector2d &ref)
                                        { return Eigen::Vector2d(map.det * (map.B_inv * f(map.to_physical(ref)))); });
  }
  return c;
}

}  // namespace pfem
