// Planar polygon primitives shared by the mesh and quadrature layers.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace wgb {

using Vec2 = Eigen::Vector2d;

// z-component of the cross product (a x b).
inline double cross2(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

// Shoelace signed area; positive for counter-clockwise loops.
double polygon_signed_area(std::span<const Vec2> loop);

// Area centroid (valid for any simple polygon).
Vec2 polygon_centroid(std::span<const Vec2> loop);

// Maximum pairwise vertex distance.
double polygon_diameter(std::span<const Vec2> loop);

// True if no two non-adjacent edges intersect and no edge is degenerate.
bool polygon_is_simple(std::span<const Vec2> loop, double tol = 1e-12);

// A point of the visibility kernel (the convex set of points that see every
// edge of a CCW simple polygon from the left), or nullopt if the kernel is
// empty or degenerate. Computed by clipping the bounding box against every
// edge half-plane.
std::optional<Vec2> polygon_kernel_point(std::span<const Vec2> loop, double tol = 1e-12);

// Ear-clipping triangulation of a CCW simple polygon; returns vertex-index
// triples into `loop`. Throws std::runtime_error if the polygon cannot be
// triangulated (non-simple input).
std::vector<std::array<int, 3>> triangulate_polygon(std::span<const Vec2> loop);

}  // namespace wgb
