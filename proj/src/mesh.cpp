// SPDX-License-Identifier: Apache-2.0

#include "pfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "pfem/error.hpp"

namespace pfem
{

namespace
{

double signed_area(const Point2 &a, const Point2 &b, const Point2 &c)
{
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

Mesh structured_grid(int n, bool cut_upper_right_quadrant)
{
  const int nv = n + 1;
  std::vector<int> index(static_cast<std::size_t>(nv * nv), -1);
  std::vector<std::array<int, 3>> cells;
  std::vector<Point2> vertices;

  auto vertex = [&](int i, int j)
  {
    int &id = index[static_cast<std::size_t>(j * nv + i)];
    if (id < 0)
    {
      id = static_cast<int>(vertices.size());
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
    return id;
  };

  // Vertices are numbered row by row so the numbering does not depend on cell order.
  for (int j = 0; j < nv; ++j)
  {
    for (int i = 0; i < nv; ++i)
    {
      const bool in_hole = cut_upper_right_quadrant && 2 * i > n && 2 * j > n;
      if (!in_hole)
      {
        vertex(i, j);
      }
    }
  }
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      if (cut_upper_right_quadrant && 2 * i >= n && 2 * j >= n)
      {
        continue;
      }
      const int v00 = vertex(i, j), v10 = vertex(i + 1, j);
      const int v01 = vertex(i, j + 1), v11 = vertex(i + 1, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  }
  return make_mesh(std::move(vertices), std::move(cells));
}

}  // namespace

double Mesh::cell_area(int c) const
{
  const auto &v = cells[static_cast<std::size_t>(c)];
  return signed_area(vertices[v[0]], vertices[v[1]], vertices[v[2]]);
}

double Mesh::cell_diameter(int c) const
{
  const auto &v = cells[static_cast<std::size_t>(c)];
  return std::max({(vertices[v[0]] - vertices[v[1]]).norm(),
                   (vertices[v[1]] - vertices[v[2]]).norm(),
                   (vertices[v[2]] - vertices[v[0]]).norm()});
}

double Mesh::area() const
{
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c)
  {
    a += cell_area(c);
  }
  return a;
}

double Mesh::edge_length(int e) const
{
  const auto &ed = edges[static_cast<std::size_t>(e)];
  return (vertices[ed[1]] - vertices[ed[0]]).norm();
}

double Mesh::boundary_length() const
{
  double l = 0.0;
  for (const auto &be : boundary_edges)
  {
    l += edge_length(be.edge);
  }
  return l;
}

Point2 Mesh::outward_normal(int boundary_index) const
{
  const auto &be = boundary_edges[static_cast<std::size_t>(boundary_index)];
  const auto &ed = edges[static_cast<std::size_t>(be.edge)];
  const Point2 t = (vertices[ed[1]] - vertices[ed[0]]).normalized();
  const Point2 n(-t.y(), t.x());
  return be.normal_outward ? n : Point2(-n);
}

Mesh make_mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> cells)
{
  Mesh m;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);
  PFEM_THROW_IF(m.cells.empty(), InvalidArgument, "make_mesh: no cells");

  std::map<std::pair<int, int>, int> edge_ids;
  m.cell_edges.resize(m.cells.size());
  for (int c = 0; c < m.num_cells(); ++c)
  {
    const auto &v = m.cells[static_cast<std::size_t>(c)];
    for (int k : v)
    {
      PFEM_THROW_IF(k < 0 || k >= m.num_vertices(), InvalidArgument,
                    "make_mesh: vertex index out of range");
    }
    PFEM_THROW_IF(!(m.cell_area(c) > 0.0), DegenerateCell,
                  "make_mesh: cell " + std::to_string(c) +
                      " has non-positive signed area");
    for (int i = 0; i < 3; ++i)
    {
      int a = v[(i + 1) % 3], b = v[(i + 2) % 3];
      if (a > b)
      {
        std::swap(a, b);
      }
      auto [it, inserted] = edge_ids.try_emplace({a, b}, m.num_edges());
      if (inserted)
      {
        m.edges.push_back({a, b});
        m.edge_cells.push_back({c, -1});
      }
      else
      {
        auto &inc = m.edge_cells[static_cast<std::size_t>(it->second)];
        PFEM_THROW_IF(inc[1] >= 0, InvalidArgument,
                      "make_mesh: edge shared by more than two cells");
        inc[1] = c;
      }
      m.cell_edges[static_cast<std::size_t>(c)][i] = it->second;
    }
  }

  for (int e = 0; e < m.num_edges(); ++e)
  {
    const auto &inc = m.edge_cells[static_cast<std::size_t>(e)];
    if (inc[1] >= 0)
    {
      continue;
    }
    const int c = inc[0];
    const auto &v = m.cells[static_cast<std::size_t>(c)];
    const auto &ce = m.cell_edges[static_cast<std::size_t>(c)];
    const int i = static_cast<int>(std::find(ce.begin(), ce.end(), e) - ce.begin());
    // The CCW local tangent has the outward normal on its right; the global normal is
    // on the left of the global tangent.
    const bool local_matches_global = v[(i + 1) % 3] < v[(i + 2) % 3];
    m.boundary_edges.push_back({e, c, i, !local_matches_global});
  }

  m.h = mesh_size(m);
  return m;
}

Mesh build_unit_square(int n)
{
  PFEM_THROW_IF(n < 1, InvalidArgument, "build_unit_square: n must be >= 1");
  return structured_grid(n, false);
}

Mesh build_lshape(int n)
{
  PFEM_THROW_IF(n < 2 || n % 2 != 0, InvalidArgument,
                "build_lshape: n must be even and >= 2");
  return structured_grid(n, true);
}

Mesh build_disk(int n)
{
  PFEM_THROW_IF(n < 1, InvalidArgument, "build_disk: n must be >= 1");
  std::vector<Point2> vertices{Point2(0.0, 0.0)};
  std::vector<std::array<int, 3>> cells;
  for (int k = 0; k < 8; ++k)
  {
    const double a = k * std::numbers::pi / 4.0;
    vertices.emplace_back(std::cos(a), std::sin(a));
    cells.push_back({0, 1 + k, 1 + (k + 1) % 8});
  }
  Mesh m = make_mesh(std::move(vertices), std::move(cells));
  for (int level = 1; level < n; ++level)
  {
    m = refine_uniform(m, true);
  }
  return m;
}

Mesh refine_uniform(const Mesh &mesh, bool project_to_unit_circle)
{
  std::vector<Point2> vertices = mesh.vertices;
  const int nv = mesh.num_vertices();
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    const auto &ed = mesh.edges[static_cast<std::size_t>(e)];
    Point2 mid = 0.5 * (mesh.vertices[ed[0]] + mesh.vertices[ed[1]]);
    if (project_to_unit_circle && mesh.edge_cells[static_cast<std::size_t>(e)][1] < 0)
    {
      mid.normalize();
    }
    vertices.push_back(mid);
  }
  std::vector<std::array<int, 3>> cells;
  cells.reserve(4 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const auto &v = mesh.cells[static_cast<std::size_t>(c)];
    const auto &ce = mesh.cell_edges[static_cast<std::size_t>(c)];
    const int ma = nv + ce[0], mb = nv + ce[1], mc = nv + ce[2];
    cells.push_back({v[0], mc, mb});
    cells.push_back({mc, v[1], ma});
    cells.push_back({mb, ma, v[2]});
    cells.push_back({ma, mb, mc});
  }
  return make_mesh(std::move(vertices), std::move(cells));
}

double mesh_size(const Mesh &mesh)
{
  PFEM_THROW_IF(mesh.cells.empty(), InvalidArgument, "mesh_size: empty mesh");
  double h = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    h = std::max(h, mesh.cell_diameter(c));
  }
  return h;
}

double shape_regularity(const Mesh &mesh)
{
  PFEM_THROW_IF(mesh.cells.empty(), InvalidArgument, "shape_regularity: empty mesh");
  double ratio = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const auto &v = mesh.cells[static_cast<std::size_t>(c)];
    const double area = std::abs(mesh.cell_area(c));
    PFEM_THROW_IF(area <= 0.0, DegenerateCell,
                  "shape_regularity: cell " + std::to_string(c) + " has zero area");
    const double perimeter = (mesh.vertices[v[0]] - mesh.vertices[v[1]]).norm() +
                             (mesh.vertices[v[1]] - mesh.vertices[v[2]]).norm() +
                             (mesh.vertices[v[2]] - mesh.vertices[v[0]]).norm();
    const double inscribed_diameter = 4.0 * area / perimeter;
    ratio = std::max(ratio, mesh.cell_diameter(c) / inscribed_diameter);
  }
  return ratio;
}

void write_mesh(std::ostream &os, const Mesh &mesh)
{
  os << std::setprecision(17);
  os << "vertices " << mesh.num_vertices() << '\n';
  for (const auto &p : mesh.vertices)
  {
    os << p.x() << ' ' << p.y() << '\n';
  }
  os << "cells " << mesh.num_cells() << '\n';
  for (const auto &c : mesh.cells)
  {
    os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  }
  os << "boundary_edges " << mesh.boundary_edges.size() << '\n';
  for (int b = 0; b < static_cast<int>(mesh.boundary_edges.size()); ++b)
  {
    const auto &be = mesh.boundary_edges[static_cast<std::size_t>(b)];
    const auto &ed = mesh.edges[static_cast<std::size_t>(be.edge)];
    const Point2 n = mesh.outward_normal(b);
    os << be.edge << ' ' << ed[0] << ' ' << ed[1] << ' ' << n.x() << ' ' << n.y()
       << '\n';
  }
}

}  // namespace pfem
