// Scaled monomial bases on cells and edges.
//
// Cell bases are monomials in ((x - x_T)/h_T, (y - y_T)/h_T), ordered by
// total degree and, within a degree block, by descending first exponent:
// 1, X, Y, X^2, XY, Y^2, ... Edge bases are powers of the signed arc
// parameter tau in [-1,1] along the edge's canonical direction.
#pragma once

#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"

#include <Eigen/Dense>

namespace wgb {

// Dimension of the polynomial space of total degree <= `degree` in 2D.
constexpr int poly_space_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

// Exponent pair (a, b) of the i-th basis monomial X^a Y^b.
std::pair<int, int> monomial_exponents(int i);
// Inverse of monomial_exponents.
int monomial_index(int a, int b);

class CellBasis {
 public:
  CellBasis(Vec2 center, double scale, int degree);

  int degree() const { return degree_; }
  int size() const { return poly_space_dim(degree_); }
  const Vec2 &center() const { return center_; }
  double scale() const { return scale_; }

  Eigen::VectorXd eval(const Vec2 &x) const;
  // Row i holds the physical-space gradient of basis function i.
  Eigen::Matrix<double, Eigen::Dynamic, 2> eval_grad(const Vec2 &x) const;

  // Values (and gradients) at all points of a rule; rows = points,
  // columns = basis functions.
  Eigen::MatrixXd values(const QuadRule &rule) const;
  Eigen::MatrixXd values(const EdgeQuadRule &rule) const;

 private:
  Vec2 center_;
  double scale_;
  int degree_;
};

CellBasis make_cell_basis(const Mesh2D &mesh, int cell, int degree);

class EdgeBasis {
 public:
  explicit EdgeBasis(int degree) : degree_(degree) {}
  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  // tau is the signed parameter in [-1,1] along the canonical direction.
  Eigen::VectorXd eval(double tau) const;
  Eigen::MatrixXd values(const EdgeQuadRule &rule) const;

 private:
  int degree_;
};

// Gram matrices under the rule's weights. Both overloads reject numerically
// rank-deficient results (smallest eigenvalue below 1e-13 of the largest),
// which guards against under-resolved rules and degenerate geometry.
Eigen::MatrixXd mass_matrix(const CellBasis &basis, const QuadRule &rule);
Eigen::MatrixXd mass_matrix(const EdgeBasis &basis, const EdgeQuadRule &rule);

}  // namespace wgb
