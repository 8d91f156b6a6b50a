// Global saddle-point assembly and direct solution of the discrete
// velocity-pressure system with homogeneous Dirichlet velocity data.
//
// Unknown ordering: velocity interior blocks per cell, velocity trace blocks
// per interior edge (boundary traces are fixed to zero and eliminated), then
// pressure blocks per cell, then a single Lagrange multiplier pinning the
// pressure mean to zero.
#pragma once

#include "wgb/weakops.hpp"

#include <Eigen/Sparse>

#include <iosfwd>

namespace wgb {

struct DofMap {
  int k = 0;
  int n_u = 0;  // velocity unknowns
  int n_p = 0;  // pressure unknowns
  std::vector<int> cell_interior;  // first velocity dof of each cell
  std::vector<int> edge_offset;    // first trace dof of each edge; -1 on the boundary
  std::vector<int> cell_pressure;  // first pressure dof of each cell
  int multiplier = -1;
  int total() const { return n_u + n_p + 1; }
};

DofMap build_dofmap(const Mesh2D &mesh, int k);

// Global indices of a cell's local velocity dofs (LocalDofLayout order);
// -1 marks eliminated boundary-trace dofs.
std::vector<int> cell_global_dofs(const DofMap &dofmap, const Mesh2D &mesh, int cell);

struct BrinkmanProblem {
  VectorFn source;
  std::vector<Eigen::Matrix2d> kappa_inv;  // inverse permeability per cell; each SPD
  int source_exactness = -1;               // quadrature degree for the load; -1 = operator default
};

// Constant isotropic permeability kappa on every cell.
std::vector<Eigen::Matrix2d> uniform_kappa_inv(const Mesh2D &mesh, double kappa);

// Default gradient lifting degree: k-1 when stabilized, k+3 when the
// stabilizer is omitted.
constexpr int default_lifting_degree(int k, bool stabilized) {
  return stabilized ? k - 1 : k + 3;
}

struct SaddleSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  DofMap dofmap;
  int k = 0;
  int r = 0;
  bool stabilized = true;
  const Mesh2D *mesh = nullptr;
  std::vector<Eigen::VectorXd> pressure_moments;  // per cell, for mean removal
};

SaddleSystem assemble_system(const Mesh2D &mesh, int k, int r, bool stabilized,
                             const BrinkmanProblem &problem);

struct WGSolution {
  WGField velocity;                       // boundary traces identically zero
  std::vector<Eigen::VectorXd> pressure;  // per cell, degree k-1, recentered to zero mean
  double multiplier = 0.0;
  double residual = 0.0;  // relative inf-norm residual of the linear solve
  Eigen::VectorXd raw;    // solution vector in dof order (before recentering)
};

// Sparse LU factorization with one step of iterative refinement. A zero
// right-hand side short-circuits to the exact zero solution. Throws
// std::runtime_error if the factorization fails.
WGSolution solve(const SaddleSystem &system);

double eval_pressure(const WGSolution &solution, const Mesh2D &mesh, int cell, const Vec2 &x);

// Plain-text coordinate dump: header "nrows ncols nnz", then one
// "row col value" line per stored entry, sorted by row then column.
void write_coo(const Eigen::SparseMatrix<double> &matrix, std::ostream &out);

}  // namespace wgb
