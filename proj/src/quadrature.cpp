// SPDX-License-Identifier: Apache-2.0

#include "pfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "pfem/error.hpp"

namespace pfem
{

void gauss_legendre(int npoints, std::vector<double> &nodes, std::vector<double> &weights)
{
  PFEM_THROW_IF(npoints < 1, InvalidArgument, "gauss_legendre: need at least one point");
  nodes.assign(static_cast<std::size_t>(npoints), 0.0);
  weights.assign(static_cast<std::size_t>(npoints), 0.0);

  // Returns P_n(x) and P_n'(x).
  auto legendre = [npoints](double x)
  {
    double prev = 1.0, p = x;
    for (int k = 2; k <= npoints; ++k)
    {
      const double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * prev) / k;
      prev = p;
      p = next;
    }
    return std::pair{p, npoints * (x * p - prev) / (x * x - 1.0)};
  };

  for (int i = 0; i < npoints; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    for (int it = 0; it < 100; ++it)
    {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    const double dp = legendre(x).second;
    nodes[static_cast<std::size_t>(npoints - 1 - i)] = x;
    weights[static_cast<std::size_t>(npoints - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule triangle_rule(int degree)
{
  PFEM_THROW_IF(degree < 1 || degree > kMaxTriangleDegree, UnsupportedDegree,
                "triangle_rule: degree " + std::to_string(degree) + " not in [1, " +
                    std::to_string(kMaxTriangleDegree) + "]");
  QuadratureRule rule;
  rule.exact_degree = degree;
  if (degree == 1)
  {
    rule.points = {Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
    return rule;
  }
  if (degree == 2)
  {
    rule.points = {Eigen::Vector2d(1.0 / 6.0, 1.0 / 6.0), Eigen::Vector2d(2.0 / 3.0, 1.0 / 6.0),
                   Eigen::Vector2d(1.0 / 6.0, 2.0 / 3.0)};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }

  // Collapsed (Duffy) tensor rule: xi = a, eta = b (1 - a), Jacobian (1 - a). The
  // integrand gains one degree in `a`, hence the extra point.
  const int na = (degree + 2) / 2 + ((degree + 2) % 2);
  const int nb = (degree + 2) / 2;
  std::vector<double> xa, wa, xb, wb;
  gauss_legendre(na, xa, wa);
  gauss_legendre(nb, xb, wb);
  for (int i = 0; i < na; ++i)
  {
    const double a = 0.5 * (xa[i] + 1.0);
    for (int j = 0; j < nb; ++j)
    {
      const double b = 0.5 * (xb[j] + 1.0);
      rule.points.emplace_back(a, b * (1.0 - a));
      rule.weights.push_back(0.25 * wa[i] * wb[j] * (1.0 - a));
    }
  }
  return rule;
}

QuadratureRule edge_rule(int degree)
{
  PFEM_THROW_IF(degree < 1 || degree > kMaxEdgeDegree, UnsupportedDegree,
                "edge_rule: degree " + std::to_string(degree) + " not in [1, " +
                    std::to_string(kMaxEdgeDegree) + "]");
  QuadratureRule rule;
  rule.exact_degree = degree;
  const int n = (degree + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i)
  {
    rule.points.emplace_back(0.5 * (x[i] + 1.0), 0.0);
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

}  // namespace pfem
