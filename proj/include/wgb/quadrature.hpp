// Gaussian quadrature on segments, triangles, and polygonal cells.
//
// 1D rules come from the Golub-Welsch eigenvalue construction; triangle rules
// are conical products of a Gauss-Jacobi rule (weight 1-x) with a
// Gauss-Legendre rule, exact for the requested total degree. Polygon rules
// fan-triangulate the cell from a kernel point (always possible for the
// star-shaped cells produced by the built-in families) and fall back to ear
// clipping; all weights are positive by construction.
#pragma once

#include "wgb/mesh.hpp"

#include <Eigen/Dense>

namespace wgb {

struct QuadRule1D {
  Eigen::VectorXd points;   // nodes in [0,1]
  Eigen::VectorXd weights;
  int exactness = 0;        // exact for polynomials up to this degree
};

struct QuadRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;  // physical coordinates
  Eigen::VectorXd weights;
  int exactness = 0;
  double total_weight() const { return weights.sum(); }
};

// A 1D rule mapped onto a physical segment a -> b. `param` holds the signed
// parameter in [-1,1] along the segment (-1 at a, +1 at b); weights carry the
// length scaling, so dotting with sampled values integrates over the segment.
struct EdgeQuadRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  Eigen::VectorXd param;
};

// n-point Gauss-Legendre rule on [0,1]; exact for degree 2n-1.
QuadRule1D gauss_legendre(int npoints);

// n-point Gauss-Jacobi rule for weight (1-x) on [0,1]; exact for degree 2n-1
// against that weight. Used internally by the conical product.
QuadRule1D gauss_jacobi_1_0(int npoints);

// Smallest Gauss-Legendre rule exact for the given degree.
QuadRule1D segment_rule(int exactness);

EdgeQuadRule map_to_segment(const QuadRule1D &rule, const Vec2 &a, const Vec2 &b);

// Conical-product rule on the triangle (a, b, c), exact for total degree
// `exactness`; ceil((exactness+1)/2)^2 points.
QuadRule triangle_rule(const Vec2 &a, const Vec2 &b, const Vec2 &c, int exactness);

// Rule over a CCW simple polygon, exact for total degree `exactness`.
QuadRule polygon_rule(std::span<const Vec2> loop, int exactness);

QuadRule cell_rule(const Mesh2D &mesh, int cell, int exactness);
EdgeQuadRule edge_rule(const Mesh2D &mesh, int edge, int exactness);

}  // namespace wgb
