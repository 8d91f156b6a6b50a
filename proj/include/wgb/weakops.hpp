// Element-local discrete weak operators.
//
// A discrete velocity on a cell carries interior polynomial coefficients of
// degree k (per component) plus degree-k trace coefficients per edge and
// component. The weak gradient lifts such a function into degree-r tensor
// polynomials, the weak divergence into degree-(k-1) scalars; both are
// defined through integration by parts against the lifting space. The
// stabilizer penalizes the interior/trace mismatch on the cell boundary,
// scaled by the inverse cell diameter.
#pragma once

#include "wgb/basis.hpp"
#include "wgb/mesh.hpp"

#include <Eigen/Dense>

#include <functional>

namespace wgb {

using ScalarFn = std::function<double(const Vec2 &)>;
using VectorFn = std::function<Vec2(const Vec2 &)>;
using TensorFn = std::function<Eigen::Matrix2d(const Vec2 &)>;

// Local degree-of-freedom layout on one cell: interior x-coefficients,
// interior y-coefficients, then per edge (in cell-local order) the x- and
// y-trace coefficients.
struct LocalDofLayout {
  int k = 0;
  int n_edges = 0;

  int n_interior_comp() const { return poly_space_dim(k); }
  int n_interior() const { return 2 * n_interior_comp(); }
  int per_edge_comp() const { return k + 1; }
  int per_edge() const { return 2 * (k + 1); }
  int total() const { return n_interior() + n_edges * per_edge(); }

  int interior(int comp, int i) const { return comp * n_interior_comp() + i; }
  int edge_first(int local_edge, int comp) const {
    return n_interior() + local_edge * per_edge() + comp * per_edge_comp();
  }
};

// All element-local matrices needed for assembly and norms. Tensor blocks of
// `gradient` are ordered (xx, xy, yx, yy), i.e. component-major with the
// derivative direction fastest.
struct ElementOps {
  LocalDofLayout layout;
  int r = 0;  // gradient lifting degree
  double diameter = 0.0;
  double area = 0.0;

  Eigen::MatrixXd gradient;    // (4 * dim P_r) x total
  Eigen::MatrixXd divergence;  // dim P_{k-1} x total
  Eigen::MatrixXd stabilizer;  // total x total, SPSD
  Eigen::MatrixXd mass_k;      // interior component mass (dim P_k)^2
  Eigen::MatrixXd mass_r;      // lifting component mass (dim P_r)^2
  Eigen::MatrixXd mass_p;      // pressure mass (dim P_{k-1})^2
  Eigen::VectorXd pressure_moments;  // integrals of the pressure basis
};

ElementOps build_element_ops(const Mesh2D &mesh, int cell, int k, int r);

// Quadrature degree that integrates every product appearing in the element
// operators exactly.
constexpr int operator_exactness(int k, int r) {
  return std::max(2 * k + 2, 2 * r + 2);
}

// L2 projections. `exactness` is the quadrature degree used on the data side;
// pass a higher value than the default when the integrand is not a degree-k
// polynomial.
Eigen::VectorXd project_scalar(const ScalarFn &f, const Mesh2D &mesh, int cell, int degree,
                               int exactness = -1);
// Componentwise cell projection; returns [x-coeffs; y-coeffs].
Eigen::VectorXd project_interior(const VectorFn &f, const Mesh2D &mesh, int cell, int degree,
                                 int exactness = -1);
// Componentwise trace projection on an edge; returns [x-coeffs; y-coeffs].
Eigen::VectorXd project_edge(const VectorFn &f, const Mesh2D &mesh, int edge, int degree,
                             int exactness = -1);

// A discrete velocity field over the whole mesh: one interior coefficient
// vector per cell and one trace coefficient vector per edge (their canonical
// orientation makes traces single-valued).
struct WGField {
  int k = 0;
  std::vector<Eigen::VectorXd> interior;  // per cell, size 2 dim P_k
  std::vector<Eigen::VectorXd> edge;      // per edge, size 2 (k+1)
};

WGField zero_field(const Mesh2D &mesh, int k);
// Componentwise projection of a smooth field onto interior and trace spaces.
WGField project_field(const VectorFn &f, const Mesh2D &mesh, int k, int exactness = -1);
WGField field_difference(const WGField &a, const WGField &b);
// Local coefficient vector of `field` on `cell`, following LocalDofLayout.
Eigen::VectorXd gather_local(const WGField &field, const Mesh2D &mesh, int cell);

// Evaluate the interior part of a field at a point of a cell.
Vec2 eval_interior(const WGField &field, const Mesh2D &mesh, int cell, const Vec2 &x);

// Largest coefficient mismatch, over one cell, between (a) the weak gradient
// and divergence of the projected field and (b) the direct projections of the
// exact gradient and divergence onto the lifting spaces. Both sides use the
// lifting degree r = k - 1; the identity this probes is exact for polynomial
// as well as general smooth fields.
double commutativity_defect_cell(const VectorFn &u, const TensorFn &grad_u, const ScalarFn &div_u,
                                 const Mesh2D &mesh, int cell, int k, int exactness = -1);

}  // namespace wgb
