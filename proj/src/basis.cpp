#include "wgb/basis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace wgb {

std::pair<int, int> monomial_exponents(int i) {
  if (i < 0) throw std::invalid_argument("monomial_exponents: negative index");
  int d = 0;
  while (poly_space_dim(d) <= i) ++d;
  const int t = i - d * (d + 1) / 2;
  return {d - t, t};
}

int monomial_index(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("monomial_index: negative exponent");
  const int d = a + b;
  return d * (d + 1) / 2 + b;
}

CellBasis::CellBasis(Vec2 center, double scale, int degree)
    : center_(std::move(center)), scale_(scale), degree_(degree) {
  if (degree < 0 || degree > 12) throw std::invalid_argument("CellBasis: degree out of range");
  if (!(scale > 0.0)) throw std::invalid_argument("CellBasis: scale must be positive");
}

namespace {

// pow_x(a) * pow_y(b) for every basis exponent pair, written into `out`.
template <typename Dest>
void fill_monomials(const Eigen::VectorXd &pow_x, const Eigen::VectorXd &pow_y, int degree,
                    Dest &&out) {
  int i = 0;
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b, ++i) out(i) = pow_x(d - b) * pow_y(b);
}

Eigen::VectorXd powers(double v, int degree) {
  Eigen::VectorXd p(degree + 1);
  p(0) = 1.0;
  for (int d = 1; d <= degree; ++d) p(d) = p(d - 1) * v;
  return p;
}

}  // namespace

Eigen::VectorXd CellBasis::eval(const Vec2 &x) const {
  const Vec2 local = (x - center_) / scale_;
  const Eigen::VectorXd px = powers(local.x(), degree_);
  const Eigen::VectorXd py = powers(local.y(), degree_);
  Eigen::VectorXd out(size());
  fill_monomials(px, py, degree_, out);
  return out;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> CellBasis::eval_grad(const Vec2 &x) const {
  const Vec2 local = (x - center_) / scale_;
  const Eigen::VectorXd px = powers(local.x(), degree_);
  const Eigen::VectorXd py = powers(local.y(), degree_);
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(size(), 2);
  int i = 0;
  for (int d = 0; d <= degree_; ++d) {
    for (int b = 0; b <= d; ++b, ++i) {
      const int a = d - b;
      out(i, 0) = a > 0 ? a * px(a - 1) * py(b) / scale_ : 0.0;
      out(i, 1) = b > 0 ? px(a) * b * py(b - 1) / scale_ : 0.0;
    }
  }
  return out;
}

namespace {

template <typename Points>
Eigen::MatrixXd cell_values_at(const CellBasis &basis, const Points &points) {
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd out(n, basis.size());
  for (int q = 0; q < n; ++q) {
    const Vec2 p = points.row(q).transpose();
    out.row(q) = basis.eval(p).transpose();
  }
  return out;
}

}  // namespace

Eigen::MatrixXd CellBasis::values(const QuadRule &rule) const {
  return cell_values_at(*this, rule.points);
}

Eigen::MatrixXd CellBasis::values(const EdgeQuadRule &rule) const {
  return cell_values_at(*this, rule.points);
}

CellBasis make_cell_basis(const Mesh2D &mesh, int cell, int degree) {
  return CellBasis(mesh.cell_centroid(cell), mesh.cell_diameter(cell), degree);
}

Eigen::VectorXd EdgeBasis::eval(double tau) const {
  Eigen::VectorXd out(size());
  out(0) = 1.0;
  for (int j = 1; j <= degree_; ++j) out(j) = out(j - 1) * tau;
  return out;
}

Eigen::MatrixXd EdgeBasis::values(const EdgeQuadRule &rule) const {
  const int n = static_cast<int>(rule.param.size());
  Eigen::MatrixXd out(n, size());
  for (int q = 0; q < n; ++q) out.row(q) = eval(rule.param(q)).transpose();
  return out;
}

namespace {

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd &values, const Eigen::VectorXd &weights,
                              const char *what) {
  Eigen::MatrixXd gram = values.transpose() * weights.asDiagonal() * values;
  gram = 0.5 * (gram + gram.transpose()).eval();  // enforce exact symmetry
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) + ": eigenvalue check failed");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-13 * hi))
    throw std::runtime_error(std::string(what) + ": numerically singular mass matrix");
  return gram;
}

}  // namespace

Eigen::MatrixXd mass_matrix(const CellBasis &basis, const QuadRule &rule) {
  if (rule.exactness < 2 * basis.degree())
    throw std::invalid_argument("mass_matrix: rule not exact for basis products");
  return weighted_gram(basis.values(rule), rule.weights, "cell mass matrix");
}

Eigen::MatrixXd mass_matrix(const EdgeBasis &basis, const EdgeQuadRule &rule) {
  return weighted_gram(basis.values(rule), rule.weights, "edge mass matrix");
}

}  // namespace wgb
