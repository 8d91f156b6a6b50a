// Conforming polygonal meshes of the unit square, with the two refinement
// families used by the convergence harness.
#pragma once

#include "wgb/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wgb {

struct MeshEdge {
  int v0 = -1;          // canonical orientation v0 -> v1 with v0 < v1
  int v1 = -1;
  int cell_left = -1;   // cell traversing the edge as v0 -> v1
  int cell_right = -1;  // cell traversing it as v1 -> v0, or -1 on the boundary
  bool on_boundary() const { return cell_right < 0 || cell_left < 0; }
};

// Edge incidence as seen from one cell: `direction` is +1 when the cell's
// boundary loop traverses the edge in its canonical v0 -> v1 orientation.
struct CellEdge {
  int edge = -1;
  int direction = 0;
};

class Mesh2D {
 public:
  // Cells are vertex-index loops, expected CCW. The constructor validates
  // indices, derives the edge table, and caches per-cell geometry; geometric
  // soundness is checked separately by validate_mesh().
  Mesh2D(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells, int level = 0);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int level() const { return level_; }

  const Vec2 &vertex(int v) const { return vertices_[v]; }
  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const int> cell(int c) const { return cells_[c]; }
  const MeshEdge &edge(int e) const { return edges_[e]; }
  std::span<const CellEdge> cell_edges(int c) const { return cell_edges_[c]; }
  const std::vector<int> &boundary_edges() const { return boundary_edges_; }

  double cell_area(int c) const { return areas_[c]; }
  const Vec2 &cell_centroid(int c) const { return centroids_[c]; }
  double cell_diameter(int c) const { return diameters_[c]; }
  double edge_length(int e) const { return edge_lengths_[e]; }
  // Unit normal of edge `e` pointing out of cell `c` (an incident cell).
  Vec2 outward_normal(int e, int c) const;

  std::vector<Vec2> cell_loop(int c) const;

  void write_text(std::ostream &out) const;
  static Mesh2D read_text(std::istream &in);

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<CellEdge>> cell_edges_;
  std::vector<int> boundary_edges_;
  std::vector<double> areas_, diameters_, edge_lengths_;
  std::vector<Vec2> centroids_;
  int level_ = 0;
};

enum class MeshFamilyKind { UniformTriangle, NonconvexPolygon };

// Structured triangulation: 2^level x 2^level squares, each split by the
// diagonal from its lower-left to its upper-right corner.
Mesh2D build_uniform_triangle_mesh(int level);

// Each square of a 2^level x 2^level grid is split by an S-shaped polyline
// into two interlocking non-convex hexagons.
Mesh2D build_nonconvex_polygon_mesh(int level);

Mesh2D build_mesh(MeshFamilyKind family, int level);
MeshFamilyKind parse_family(const std::string &name);  // "tri" | "poly"
std::string family_name(MeshFamilyKind family);

// Geometric and topological diagnostics; empty result means the mesh is valid.
// Checks: CCW simple cells, positive areas summing to 1, edge lengths above
// tolerance, interior edges shared by exactly two cells with opposite
// orientation, boundary edges on the unit-square boundary.
std::vector<std::string> validate_mesh(const Mesh2D &mesh);

struct MeshMetrics {
  double h = 0.0;         // max cell diameter
  double min_edge = 0.0;  // shortest edge length
  int cell_count = 0;
  int edge_count = 0;
};

MeshMetrics mesh_metrics(const Mesh2D &mesh);

}  // namespace wgb
