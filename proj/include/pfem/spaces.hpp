// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_SPACES_HPP
#define PFEM_SPACES_HPP

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "pfem/elements.hpp"
#include "pfem/mesh.hpp"

namespace pfem
{

enum class Conformity
{
  L2,
  H1,
  Hdiv,
  BoundaryH1_2,
};

using ScalarField = std::function<double(const Point2 &)>;
using VectorField = std::function<Eigen::Vector2d(const Point2 &)>;
// Boundary data may depend on the outward unit normal of the edge it is sampled on.
using BoundaryField = std::function<double(const Point2 &x, const Point2 &normal)>;

// Reference basis tabulated at a fixed set of reference points.
struct ReferenceTable
{
  std::vector<Eigen::Vector2d> points;
  Eigen::MatrixXd value, dxi, deta;  // scalar element: rows points, cols local dofs
  Eigen::MatrixXd vx, vy, div;       // H(div) element
};

// Physical basis on one cell at the tabulated points. Local dofs of vector Lagrange
// spaces are interleaved (2 * node + component); signs are already applied.
struct CellBasis
{
  Eigen::MatrixXd value, grad_x, grad_y;  // scalar spaces
  Eigen::MatrixXd vx, vy, div;            // vector spaces
};

class FunctionSpace
{
public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, const ElementFamily &family);

  const Mesh &mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ElementFamily &family() const { return family_; }
  const ReferenceElement &element() const { return element_; }
  Conformity conformity() const { return conformity_; }

  int dim() const { return ndofs_; }
  int components() const { return components_; }
  bool is_vector() const { return family_.shape == ValueShape::Vector2; }
  int local_dim() const { return element_.dof_count() * components_; }

  const std::vector<int> &cell_dofs(int c) const { return cell_dofs_[static_cast<std::size_t>(c)]; }
  const std::vector<double> &cell_signs(int c) const { return cell_signs_[static_cast<std::size_t>(c)]; }

  ReferenceTable tabulate(const std::vector<Eigen::Vector2d> &ref_points) const;
  CellBasis cell_basis(const ReferenceTable &table, const CellMap &map, int c) const;

  Eigen::VectorXd interpolate(const ScalarField &f) const;
  Eigen::VectorXd interpolate(const VectorField &f) const;

  double eval_scalar(const Eigen::VectorXd &coeffs, int c, const Eigen::Vector2d &ref) const;
  Eigen::Vector2d eval_vector(const Eigen::VectorXd &coeffs, int c, const Eigen::Vector2d &ref) const;

private:
  void number_lagrange();
  void number_hdiv();

  std::shared_ptr<const Mesh> mesh_;
  ElementFamily family_;
  ReferenceElement element_;
  Conformity conformity_;
  int components_ = 1;
  int ndofs_ = 0;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<std::vector<double>> cell_signs_;
};

// Continuity of CG boundary spaces at corners of the boundary polyline. Neumann data such
// as sigma.n jump where the normal turns, so by default a CG space is continuous along each
// straight side and carries one dof per side at a corner. Continuous joins every vertex.
enum class BoundaryCorners
{
  Split,
  Continuous,
};

// A vertex counts as a corner when adjacent outward normals differ by more than this angle.
inline constexpr double kCornerAngle = 1.0471975511965976;  // pi / 3

// Lagrange space on the boundary polyline. Each boundary edge carries the P_m basis in
// the parameter s in [0,1] running along the global edge direction.
class BoundarySpace
{
public:
  BoundarySpace(std::shared_ptr<const Mesh> mesh, FamilyKind kind, int order,
                BoundaryCorners corners = BoundaryCorners::Split);

  const Mesh &mesh() const { return *mesh_; }
  FamilyKind kind() const { return kind_; }
  int order() const { return order_; }
  int dim() const { return ndofs_; }
  std::string name() const;
  Conformity conformity() const { return Conformity::BoundaryH1_2; }

  // Global dofs on boundary edge b (index into mesh.boundary_edges), ordered by node s.
  const std::vector<int> &edge_dofs(int b) const { return edge_dofs_[static_cast<std::size_t>(b)]; }
  int num_edges() const { return static_cast<int>(edge_dofs_.size()); }

  Eigen::VectorXd eval_basis(double s) const;
  // Physical point at parameter s on boundary edge b.
  Point2 edge_point(int b, double s) const;

  // L2 projection of f onto the space.
  Eigen::VectorXd interpolate(const BoundaryField &f) const;

  const Eigen::SparseMatrix<double> &mass() const { return mass_; }

private:
  std::shared_ptr<const Mesh> mesh_;
  FamilyKind kind_;
  int order_;
  int ndofs_ = 0;
  std::vector<std::vector<int>> edge_dofs_;
  Eigen::SparseMatrix<double> mass_;
  std::shared_ptr<const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> mass_solver_;
};

FunctionSpace build_space(std::shared_ptr<const Mesh> mesh, const ElementFamily &family);
BoundarySpace build_boundary_space(std::shared_ptr<const Mesh> mesh, FamilyKind kind, int order,
                                   BoundaryCorners corners = BoundaryCorners::Split);

// Lagrange basis on [0,1] with nodes j/m (midpoint when m = 0).
Eigen::VectorXd lagrange_1d(int order, double s);

}  // namespace pfem

#endif  // PFEM_SPACES_HPP
