// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_ELEMENTS_HPP
#define PFEM_ELEMENTS_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfem/mesh.hpp"

namespace pfem
{

enum class FamilyKind
{
  CG,
  DG,
  RT,
  BDM,
};

enum class ValueShape
{
  Scalar,
  Vector2,
};

struct ElementFamily
{
  FamilyKind kind = FamilyKind::CG;
  int order = 1;
  ValueShape shape = ValueShape::Scalar;

  // Parses "CG1", "CG_1", "RT2", ... Shape defaults to vector for RT/BDM.
  static ElementFamily parse(const std::string &text, ValueShape shape = ValueShape::Scalar);

  std::string name() const;  // e.g. "CG_1"
  bool is_hdiv() const { return kind == FamilyKind::RT || kind == FamilyKind::BDM; }
  bool is_lagrange() const { return kind == FamilyKind::CG || kind == FamilyKind::DG; }

  // Highest total polynomial degree present in the local space.
  int polynomial_degree() const { return order; }

  bool operator==(const ElementFamily &) const = default;
};

// Checks the implemented range: CG 1..3, DG 0..3, RT 1..2, BDM 1..2.
void validate_family(const ElementFamily &family);

enum class DofKind
{
  VertexValue,
  EdgePointValue,
  InteriorPointValue,
  EdgeMoment,
  InteriorMoment,
};

// A linear functional l(v) = sum_k weight_k * (direction_k . v(point_k)); directions
// are empty for scalar elements.
struct DofFunctional
{
  DofKind kind;
  int entity;        // local vertex/edge index; 0 for the cell interior
  int moment_order;  // Legendre degree for edge moments, point index otherwise
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  std::vector<Eigen::Vector2d> directions;
};

struct ScalarBasisValues
{
  Eigen::VectorXd values;
  Eigen::MatrixX2d gradients;  // reference gradients, one row per basis function
};

struct HdivBasisValues
{
  Eigen::MatrixX2d values;  // reference vector values, one row per basis function
  Eigen::VectorXd divergences;
};

// Scalar Lagrange (CG/DG) or H(div) (RT/BDM) element on the reference triangle
// (0,0), (1,0), (0,1). The basis is built dual to the DOF functionals from a monomial
// prebasis.
class ReferenceElement
{
public:
  explicit ReferenceElement(const ElementFamily &family);

  const ElementFamily &family() const { return family_; }
  int dof_count() const { return static_cast<int>(functionals_.size()); }
  const std::vector<DofFunctional> &functionals() const { return functionals_; }
  bool is_vector() const { return family_.is_hdiv(); }

  // Local DOFs attached to each local vertex / edge and to the interior.
  const std::vector<int> &vertex_dofs(int v) const { return vertex_dofs_[v]; }
  const std::vector<int> &edge_dofs(int e) const { return edge_dofs_[e]; }
  const std::vector<int> &interior_dofs() const { return interior_dofs_; }

  ScalarBasisValues eval_scalar(const Eigen::Vector2d &p) const;
  HdivBasisValues eval_hdiv(const Eigen::Vector2d &p) const;

  double apply_scalar_functional(int i, const std::function<double(const Eigen::Vector2d &)> &f) const;
  double apply_vector_functional(
      int i, const std::function<Eigen::Vector2d(const Eigen::Vector2d &)> &f) const;

private:
  void build_lagrange();
  void build_hdiv();

  ElementFamily family_;
  std::vector<std::array<int, 2>> monomials_;
  std::vector<DofFunctional> functionals_;
  std::array<std::vector<int>, 3> vertex_dofs_;
  std::array<std::vector<int>, 3> edge_dofs_;
  std::vector<int> interior_dofs_;
  // Basis coefficients on the monomials, one column per basis function.
  Eigen::MatrixXd coeff_x_;
  Eigen::MatrixXd coeff_y_;  // vector elements only
};

// Reference triangle vertices and local edges (edge i joins vertices (i+1)%3, (i+2)%3).
Eigen::Vector2d reference_vertex(int i);
std::array<int, 2> reference_edge_vertices(int i);

// Shifted Legendre polynomial of degree n on [0, 1].
double shifted_legendre(int n, double s);

// Affine cell map F(x^) = B x^ + b.
struct CellMap
{
  Eigen::Matrix2d B;
  Eigen::Vector2d b;
  double det = 0.0;
  Eigen::Matrix2d B_inv;

  Eigen::Vector2d to_physical(const Eigen::Vector2d &ref) const { return B * ref + b; }
  Eigen::Vector2d to_reference(const Eigen::Vector2d &x) const { return B_inv * (x - b); }

  Eigen::Vector2d map_gradient(const Eigen::Vector2d &ref_grad) const
  {
    return B_inv.transpose() * ref_grad;
  }
  // Contravariant Piola transform.
  Eigen::Vector2d piola(const Eigen::Vector2d &ref_value) const { return B * ref_value / det; }
  double piola_divergence(double ref_div) const { return ref_div / det; }
};

CellMap make_cell_map(const Point2 &v0, const Point2 &v1, const Point2 &v2);
CellMap cell_map(const Mesh &mesh, int cell);

// Local degrees of freedom of `f` on a cell: nodal values for Lagrange elements, DOF
// functionals of the Piola pullback for H(div) elements. Signs are not applied.
Eigen::VectorXd interpolate_local_scalar(const ReferenceElement &elem,
                                         const std::function<double(const Point2 &)> &f,
                                         const CellMap &map);
Eigen::VectorXd interpolate_local_vector(const ReferenceElement &elem,
                                         const std::function<Eigen::Vector2d(const Point2 &)> &f,
                                         const CellMap &map);

}  // namespace pfem

#endif  // PFEM_ELEMENTS_HPP
