// Manufactured-solution verification: exact Brinkman data on the unit
// square, discrete error norms, and mesh-refinement convergence studies.
#pragma once

#include "wgb/system.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wgb {

// A divergence-free velocity / zero-mean pressure pair with homogeneous
// velocity boundary data, together with the matching momentum source for
// unit viscosity and constant isotropic permeability kappa. The benchmark
// velocity is the curl of the stream function 4 A(x) A(y) with
// A(t) = t^2 - 2t^3 + t^4; the pressure is (x - 1/2)^3.
struct BrinkmanCase {
  double kappa = 1.0;
  VectorFn velocity;
  TensorFn velocity_gradient;  // (i,j) entry = d(u_i)/dx_j
  ScalarFn divergence;         // identically zero for this case
  ScalarFn pressure;
  VectorFn source;
};

BrinkmanCase brinkman_benchmark(double kappa);

// Quadrature degree used for integrals involving the benchmark data (degree-7
// polynomials), never below the operator default.
constexpr int data_exactness(int k, int r) {
  return std::max(operator_exactness(k, r), k + 7);
}

struct ErrorTriple {
  double velocity_l2 = 0.0;  // interior part against the projected field
  double energy = 0.0;
  double pressure_l2 = 0.0;
};

// Discrete energy norm of a field: weak-gradient energy + permeability mass
// + scaled interior/trace boundary mismatch (the mismatch term is included
// for every lifting degree r).
double energy_norm(const WGField &field, const Mesh2D &mesh, int r,
                   const std::vector<Eigen::Matrix2d> &kappa_inv);

ErrorTriple compute_errors(const WGSolution &solution, const BrinkmanCase &exact,
                           const Mesh2D &mesh, int r);

// Largest coefficient of the lifted divergence of the discrete velocity over
// all cells; zero (to rounding) for every converged solve.
double max_discrete_divergence(const WGSolution &solution, const Mesh2D &mesh);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  ErrorTriple error;
  std::array<double, 3> rate = {0.0, 0.0, 0.0};  // velocity L2, energy, pressure L2
  bool has_rate = false;
  double residual = 0.0;
  double max_divergence = 0.0;
};

struct ConvergenceReport {
  MeshFamilyKind family = MeshFamilyKind::UniformTriangle;
  int k = 1;
  int r = 0;
  bool stabilized = true;
  double kappa = 1.0;
  std::vector<ConvergenceRow> rows;
};

ConvergenceReport run_convergence(MeshFamilyKind family, int k, int r, bool stabilized,
                                  int level_begin, int level_end, double kappa);

// Machine-readable CSV: '#' comment lines for the effective configuration,
// then a header row and one row per level. Rate fields are empty on the
// coarsest level.
void write_csv(const ConvergenceReport &report, std::ostream &out);
// Human-readable aligned table with three-significant-digit errors.
void write_table(const ConvergenceReport &report, std::ostream &out);

// "0.XXXE+Y" formatting with a three-digit mantissa in [0.100, 1.000).
std::string format_scientific3(double value);

}  // namespace wgb
