#pragma once

#include <array>
#include <string>
#include <vector>

#include "kirigami/geometry.hpp"

namespace kirigami {

enum class BoundaryTag {
  dirichlet_left,
  dirichlet_right,
  neumann_top,
  neumann_bottom,
};

bool is_dirichlet(BoundaryTag tag);
const char* tag_name(BoundaryTag tag);

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::dirichlet_left;
};

// Conforming triangle mesh with tagged boundary edges. Immutable after
// construction; the constructor validates orientation, conformity and
// boundary tiling and computes the mesh size h (max longest edge).
class Triangulation2D {
 public:
  Triangulation2D(std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> triangles,
                  std::vector<BoundaryEdge> boundary_edges);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  double h() const { return h_; }

  // Vertices lying on a Dirichlet-tagged edge (corners count as Dirichlet).
  const std::vector<int>& dirichlet_vertices() const { return dirichlet_vertices_; }
  bool vertex_is_dirichlet(int v) const { return dirichlet_mask_[v] != 0; }

  double triangle_area(int t) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<int> dirichlet_vertices_;
  std::vector<char> dirichlet_mask_;
  double h_ = 0.0;
};

// Crossed-pattern structured mesh of (0,L)x(0,L): every grid cell is split
// into 4 triangles around its centroid. Left/right edges are Dirichlet,
// top/bottom Neumann. Vertex count (nx+1)(ny+1) + nx*ny, triangles 4*nx*ny.
Triangulation2D generate_crossed_mesh(int nx, int ny, double L);

struct MeshStatistics {
  double h = 0.0;
  int vertex_count = 0;
  int triangle_count = 0;
  double min_angle_deg = 0.0;
};

MeshStatistics mesh_statistics(const Triangulation2D& mesh);

// ASCII mesh format:
//   ntri-mesh 1
//   <nv> <nt> <nb>
//   nv lines: <x> <y>
//   nt lines: <i0> <i1> <i2>     (0-based, counterclockwise)
//   nb lines: <i0> <i1> <tag>    (tag: dirichlet_left, dirichlet_right,
//                                 neumann_top, neumann_bottom)
std::string write_mesh(const Triangulation2D& mesh);
Triangulation2D read_mesh(const std::string& text);

}  // namespace kirigami
