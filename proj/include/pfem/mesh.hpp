// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_MESH_HPP
#define PFEM_MESH_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace pfem
{

using Point2 = Eigen::Vector2d;

//
// Simplicial 2D triangulation. Cells are counterclockwise vertex triples. Edge e joins
// edges[e][0] < edges[e][1]; its global tangent runs from the lower to the higher vertex
// index and its global normal is that tangent rotated by +90 degrees.
//
struct Mesh
{
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::array<int, 2>> edges;

  // cell_edges[c][i] is the edge opposite local vertex i, i.e. joining local vertices
  // (i+1)%3 and (i+2)%3.
  std::vector<std::array<int, 3>> cell_edges;

  // Incident cells per edge; second entry is -1 on the boundary.
  std::vector<std::array<int, 2>> edge_cells;

  struct BoundaryEdge
  {
    int edge;
    int cell;
    int local_index;    // local edge index inside `cell`
    bool normal_outward;  // global edge normal coincides with the outward normal
  };
  std::vector<BoundaryEdge> boundary_edges;

  double h = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double cell_area(int c) const;
  double cell_diameter(int c) const;
  double area() const;
  double boundary_length() const;

  // Outward unit normal of a boundary edge (index into boundary_edges).
  Point2 outward_normal(int boundary_index) const;
  double edge_length(int e) const;
};

// Builds edges, incidence and boundary data from vertices and CCW cells.
Mesh make_mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> cells);

// n x n squares on (0,1)^2, each split along its lower-left to upper-right diagonal.
Mesh build_unit_square(int n);

// Unit square minus [1/2,1]x[1/2,1]; n must be even.
Mesh build_lshape(int n);

// Octagonal fan around the origin, uniformly refined n-1 times with new boundary
// vertices projected on the unit circle.
Mesh build_disk(int n);

// Uniform red refinement; when `project_to_unit_circle` is set new boundary vertices
// are pushed radially onto the unit circle.
Mesh refine_uniform(const Mesh &mesh, bool project_to_unit_circle = false);

double mesh_size(const Mesh &mesh);

// max_K h_K / d_K with d_K the inscribed-circle diameter.
double shape_regularity(const Mesh &mesh);

// Plain-text dump: "vertices", "cells" and "boundary_edges" sections.
void write_mesh(std::ostream &os, const Mesh &mesh);

}  // namespace pfem

#endif  // PFEM_MESH_HPP
