#include "wgb/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace wgb {

namespace {

// Gauss rule from the symmetric tridiagonal Jacobi matrix of a three-term
// recurrence: nodes are eigenvalues, weights are mu0 * (first eigenvector
// component)^2 (Golub-Welsch).
QuadRule1D golub_welsch(const Eigen::VectorXd &alpha, const Eigen::VectorXd &beta, double mu0) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = alpha(i);
    if (i + 1 < n) {
      const double b = std::sqrt(beta(i + 1));
      jacobi(i, i + 1) = b;
      jacobi(i + 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("quadrature: Jacobi matrix eigensolve failed");
  QuadRule1D rule;
  rule.points = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = mu0 * v0 * v0;
  }
  rule.exactness = 2 * n - 1;
  return rule;
}

}  // namespace

QuadRule1D gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(npoints);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(npoints);
  for (int i = 1; i < npoints; ++i) beta(i) = i * i / (4.0 * i * i - 1.0);
  QuadRule1D rule = golub_welsch(alpha, beta, 2.0);
  // Map from [-1,1] to [0,1].
  rule.points = (rule.points.array() + 1.0) / 2.0;
  rule.weights /= 2.0;
  return rule;
}

QuadRule1D gauss_jacobi_1_0(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_jacobi_1_0: need at least one point");
  // Recurrence coefficients for the Jacobi weight (1-x)^a (1+x)^b on [-1,1]
  // with a = 1, b = 0.
  const double a = 1.0, b = 0.0;
  Eigen::VectorXd alpha(npoints), beta(npoints);
  beta(0) = 0.0;
  alpha(0) = (b - a) / (a + b + 2.0);
  for (int i = 1; i < npoints; ++i) {
    const double s = 2.0 * i + a + b;
    alpha(i) = (b * b - a * a) / (s * (s + 2.0));
    if (i == 1)
      beta(i) = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
    else
      beta(i) = 4.0 * i * (i + a) * (i + b) * (i + a + b) / (s * s * (s + 1.0) * (s - 1.0));
  }
  QuadRule1D rule = golub_welsch(alpha, beta, 2.0);  // mu0 = integral of (1-x) over [-1,1]
  // Map to [0,1]: nodes (x+1)/2, and the weight (1-x) picks up a factor 1/2
  // on top of the dx scaling, so the mapped weights integrate against (1-s).
  rule.points = (rule.points.array() + 1.0) / 2.0;
  rule.weights /= 4.0;
  return rule;
}

QuadRule1D segment_rule(int exactness) {
  const int n = std::max(1, (std::max(exactness, 0) + 2) / 2);
  return gauss_legendre(n);
}

EdgeQuadRule map_to_segment(const QuadRule1D &rule, const Vec2 &a, const Vec2 &b) {
  const int n = static_cast<int>(rule.points.size());
  const double length = (b - a).norm();
  EdgeQuadRule out;
  out.points.resize(n, 2);
  out.weights.resize(n);
  out.param.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = rule.points(i);
    const Vec2 p = a + t * (b - a);
    out.points.row(i) = p.transpose();
    out.weights(i) = rule.weights(i) * length;
    out.param(i) = 2.0 * t - 1.0;
  }
  return out;
}

QuadRule triangle_rule(const Vec2 &a, const Vec2 &b, const Vec2 &c, int exactness) {
  const int n = std::max(1, (std::max(exactness, 0) + 2) / 2);
  const QuadRule1D gj = gauss_jacobi_1_0(n);
  const QuadRule1D gl = gauss_legendre(n);
  const double jac = cross2(b - a, c - a);  // twice the signed area
  if (jac <= 0.0) throw std::invalid_argument("triangle_rule: triangle not counter-clockwise");

  QuadRule rule;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  rule.exactness = exactness;
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    const double xi = gj.points(i);
    for (int j = 0; j < n; ++j) {
      // Collapsed coordinates: (xi, (1-xi)t) covers the reference triangle.
      const double eta = (1.0 - xi) * gl.points(j);
      const Vec2 p = a + xi * (b - a) + eta * (c - a);
      rule.points.row(idx) = p.transpose();
      rule.weights(idx) = gj.weights(i) * gl.weights(j) * jac;
      ++idx;
    }
  }
  return rule;
}

namespace {

QuadRule concatenate_triangle_rules(std::span<const Vec2> loop,
                                    std::span<const std::array<int, 3>> tris, int exactness) {
  std::vector<QuadRule> parts;
  parts.reserve(tris.size());
  int total = 0;
  for (const auto &t : tris) {
    parts.push_back(triangle_rule(loop[t[0]], loop[t[1]], loop[t[2]], exactness));
    total += static_cast<int>(parts.back().weights.size());
  }
  QuadRule rule;
  rule.points.resize(total, 2);
  rule.weights.resize(total);
  rule.exactness = exactness;
  int at = 0;
  for (const QuadRule &part : parts) {
    const int n = static_cast<int>(part.weights.size());
    rule.points.middleRows(at, n) = part.points;
    rule.weights.segment(at, n) = part.weights;
    at += n;
  }
  return rule;
}

}  // namespace

QuadRule polygon_rule(std::span<const Vec2> loop, int exactness) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) throw std::invalid_argument("polygon_rule: fewer than three vertices");
  if (n == 3) return triangle_rule(loop[0], loop[1], loop[2], exactness);

  // Preferred path: fan from a kernel point, which yields CCW triangles (and
  // hence positive weights) even for non-convex star-shaped cells.
  if (auto center = polygon_kernel_point(loop)) {
    std::vector<Vec2> pts(loop.begin(), loop.end());
    pts.push_back(*center);
    std::vector<std::array<int, 3>> tris;
    tris.reserve(n);
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
      if (cross2(loop[(i + 1) % n] - loop[i], *center - loop[i]) <= 1e-15) {
        degenerate = true;  // kernel point (numerically) on an edge line
        break;
      }
      tris.push_back({i, (i + 1) % n, n});
    }
    if (!degenerate) return concatenate_triangle_rules(pts, tris, exactness);
  }

  const auto tris = triangulate_polygon(loop);
  return concatenate_triangle_rules(loop, tris, exactness);
}

QuadRule cell_rule(const Mesh2D &mesh, int cell, int exactness) {
  const auto loop = mesh.cell_loop(cell);
  return polygon_rule(loop, exactness);
}

EdgeQuadRule edge_rule(const Mesh2D &mesh, int edge, int exactness) {
  const MeshEdge &e = mesh.edge(edge);
  return map_to_segment(segment_rule(exactness), mesh.vertex(e.v0), mesh.vertex(e.v1));
}

}  // namespace wgb
