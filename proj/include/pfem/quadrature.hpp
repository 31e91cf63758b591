// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_QUADRATURE_HPP
#define PFEM_QUADRATURE_HPP

#include <vector>

#include <Eigen/Core>

namespace pfem
{

// Points live on the reference triangle {xi, eta >= 0, xi + eta <= 1} (weights sum to
// 1/2) or on the unit interval (x component only, weights sum to 1).
struct QuadratureRule
{
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxTriangleDegree = 12;
inline constexpr int kMaxEdgeDegree = 20;

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int npoints, std::vector<double> &nodes, std::vector<double> &weights);

QuadratureRule triangle_rule(int degree);
QuadratureRule edge_rule(int degree);

}  // namespace pfem

#endif  // PFEM_QUADRATURE_HPP
