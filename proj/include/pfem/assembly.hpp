// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_ASSEMBLY_HPP
#define PFEM_ASSEMBLY_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "pfem/materials.hpp"
#include "pfem/spaces.hpp"

namespace pfem
{

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Causality
{
  Neumann,    // normal stress in, velocity out
  Dirichlet,  // velocity in, normal stress out
};

std::string to_string(Causality c);
Causality parse_causality(const std::string &text);

// 2 * (highest polynomial degree of the spaces) + 2, clamped to the supported range.
int default_quadrature_degree(int max_polynomial_degree);

SparseMatrix assemble_mass_p(const FunctionSpace &space_p,
                             const std::function<double(const Point2 &)> &rho, int degree = 0);
SparseMatrix assemble_mass_q(const FunctionSpace &space_q,
                             const std::function<Eigen::Matrix2d(const Point2 &)> &T_inverse,
                             int degree = 0);
// D_ij = int phi_q^i . grad phi_p^j (cellwise gradient for discontinuous p-spaces).
SparseMatrix assemble_D(const FunctionSpace &space_q, const FunctionSpace &space_p, int degree = 0);
// B_ij = int_{boundary} phi_p^i psi^j.
SparseMatrix assemble_B(const FunctionSpace &space_p, const BoundarySpace &boundary, int degree = 0);
SparseMatrix assemble_M_boundary(const BoundarySpace &boundary, int degree = 0);
// <Y>_ij = int_{boundary} Y(t, s) psi^i psi^j.
SparseMatrix assemble_admittance(const BoundarySpace &boundary, const BoundaryCoefficient &Y,
                                 double t, int degree = 0);

struct DirichletBlocks
{
  SparseMatrix D_tilde;  // N_q x N_p, -int div(phi_q^i) phi_p^j
  SparseMatrix B_tilde;  // N_b x N_q, int psi^i (phi_q^j . n)
};
DirichletBlocks assemble_dirichlet_blocks(const FunctionSpace &space_q, const FunctionSpace &space_p,
                                          const BoundarySpace &boundary, int degree = 0);

// G_ij = int_{boundary} (phi_q^i . n) phi_p^j, the boundary term of Green's formula.
SparseMatrix assemble_boundary_pairing(const FunctionSpace &space_q, const FunctionSpace &space_p,
                                       int degree = 0);

//
// Finite-dimensional port-Hamiltonian system
//   blkdiag(M_q, M_p) dE/dt = J E + G u,   M_b y = G^T E
// with J = [[0, C], [-C^T, 0]]. Neumann: C = D, G = [0; B]. Dirichlet: C = D~,
// G = [B~^T; 0].
//
struct PHSystem
{
  Causality causality = Causality::Neumann;
  std::shared_ptr<const FunctionSpace> space_q;
  std::shared_ptr<const FunctionSpace> space_p;
  std::shared_ptr<const BoundarySpace> boundary;
  Material material;
  int quadrature_degree = 0;

  SparseMatrix M_q;
  SparseMatrix M_p;
  SparseMatrix M_b;
  SparseMatrix coupling;  // D or D~
  SparseMatrix input;     // B (N_p x N_b) or B~ (N_b x N_q)
  std::vector<std::string> warnings;

  int n_q() const { return static_cast<int>(M_q.rows()); }
  int n_p() const { return static_cast<int>(M_p.rows()); }
  int n_b() const { return static_cast<int>(M_b.rows()); }
  int n_state() const { return n_q() + n_p(); }

  SparseMatrix mass() const;
  SparseMatrix structure() const;
  SparseMatrix input_operator() const;  // N_state x N_b
  // [[J, G], [-G^T, 0]]
  SparseMatrix extended_structure() const;
};

PHSystem assemble_system(std::shared_ptr<const FunctionSpace> space_q,
                         std::shared_ptr<const FunctionSpace> space_p,
                         std::shared_ptr<const BoundarySpace> boundary, const Material &material,
                         Causality causality, int quadrature_degree = 0);

// Coordinate text dump: "rows cols nnz" header then "row col value" lines.
void write_matrix(std::ostream &os, const SparseMatrix &m);

}  // namespace pfem

#endif  // PFEM_ASSEMBLY_HPP
