#include "wgb/system.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace wgb {

DofMap build_dofmap(const Mesh2D &mesh, int k) {
  DofMap map;
  map.k = k;
  const int nk2 = 2 * poly_space_dim(k);
  const int ne2 = 2 * (k + 1);

  map.cell_interior.resize(mesh.n_cells());
  int at = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    map.cell_interior[c] = at;
    at += nk2;
  }
  map.edge_offset.assign(mesh.n_edges(), -1);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge(e).on_boundary()) continue;
    map.edge_offset[e] = at;
    at += ne2;
  }
  map.n_u = at;

  map.cell_pressure.resize(mesh.n_cells());
  const int np = poly_space_dim(k - 1);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    map.cell_pressure[c] = at;
    at += np;
  }
  map.n_p = at - map.n_u;
  map.multiplier = at;
  return map;
}

std::vector<int> cell_global_dofs(const DofMap &dofmap, const Mesh2D &mesh, int cell) {
  LocalDofLayout layout{dofmap.k, static_cast<int>(mesh.cell_edges(cell).size())};
  std::vector<int> dofs(layout.total(), -1);
  for (int i = 0; i < layout.n_interior(); ++i) dofs[i] = dofmap.cell_interior[cell] + i;
  const auto cell_edges = mesh.cell_edges(cell);
  for (int le = 0; le < layout.n_edges; ++le) {
    const int offset = dofmap.edge_offset[cell_edges[le].edge];
    if (offset < 0) continue;
    for (int i = 0; i < layout.per_edge(); ++i) dofs[layout.edge_first(le, 0) + i] = offset + i;
  }
  return dofs;
}

std::vector<Eigen::Matrix2d> uniform_kappa_inv(const Mesh2D &mesh, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("permeability must be positive");
  return std::vector<Eigen::Matrix2d>(mesh.n_cells(), Eigen::Matrix2d::Identity() / kappa);
}

namespace {

void check_kappa_inv(const std::vector<Eigen::Matrix2d> &kappa_inv, int n_cells) {
  if (static_cast<int>(kappa_inv.size()) != n_cells)
    throw std::invalid_argument("kappa_inv: one matrix per cell required");
  for (const auto &m : kappa_inv) {
    if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm()))
      throw std::invalid_argument("kappa_inv: matrix not symmetric");
    if (!(m.trace() > 0.0 && m.determinant() > 0.0))
      throw std::invalid_argument("kappa_inv: matrix not positive definite");
  }
}

}  // namespace

SaddleSystem assemble_system(const Mesh2D &mesh, int k, int r, bool stabilized,
                             const BrinkmanProblem &problem) {
  if (k < 1 || k > 4) throw std::invalid_argument("assemble_system: k out of supported range [1,4]");
  if (r < k - 1) throw std::invalid_argument("assemble_system: lifting degree below k-1");
  if (!problem.source) throw std::invalid_argument("assemble_system: missing source term");
  check_kappa_inv(problem.kappa_inv, mesh.n_cells());

  SaddleSystem sys;
  sys.k = k;
  sys.r = r;
  sys.stabilized = stabilized;
  sys.mesh = &mesh;
  sys.dofmap = build_dofmap(mesh, k);
  sys.pressure_moments.resize(mesh.n_cells());

  const int n = sys.dofmap.total();
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;

  const int nk = poly_space_dim(k);
  const int np = poly_space_dim(k - 1);
  const int nr = poly_space_dim(r);
  const int load_exactness =
      problem.source_exactness >= 0 ? problem.source_exactness : operator_exactness(k, r);

  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const ElementOps ops = build_element_ops(mesh, cell, k, r);
    const int total = ops.layout.total();

    // Velocity block: weak-gradient energy + permeability mass (+ stabilizer).
    Eigen::MatrixXd a_local = Eigen::MatrixXd::Zero(total, total);
    for (int block = 0; block < 4; ++block) {
      const auto g = ops.gradient.middleRows(block * nr, nr);
      a_local.noalias() += g.transpose() * ops.mass_r * g;
    }
    const Eigen::Matrix2d &ki = problem.kappa_inv[cell];
    for (int c1 = 0; c1 < 2; ++c1)
      for (int c2 = 0; c2 < 2; ++c2)
        a_local.block(ops.layout.interior(c1, 0), ops.layout.interior(c2, 0), nk, nk) +=
            ki(c1, c2) * ops.mass_k;
    if (stabilized) a_local += ops.stabilizer;
    // Make the local block bitwise symmetric so the scattered matrix is too.
    a_local = (0.5 * (a_local + a_local.transpose())).eval();

    // Pressure coupling rows: -(lifted divergence, pressure test functions).
    const Eigen::MatrixXd b_local = -(ops.mass_p * ops.divergence);
    sys.pressure_moments[cell] = ops.pressure_moments;

    // Load vector against the interior basis.
    const QuadRule rule = cell_rule(mesh, cell, load_exactness);
    const CellBasis basis_k = make_cell_basis(mesh, cell, k);
    const Eigen::MatrixXd vk = basis_k.values(rule);
    const int nq = static_cast<int>(rule.weights.size());
    Eigen::MatrixXd samples(nq, 2);
    for (int q = 0; q < nq; ++q)
      samples.row(q) = problem.source(rule.points.row(q).transpose()).transpose();
    Eigen::VectorXd f_local(2 * nk);
    for (int comp = 0; comp < 2; ++comp)
      f_local.segment(comp * nk, nk) =
          vk.transpose() * (rule.weights.asDiagonal() * samples.col(comp));

    const std::vector<int> dofs = cell_global_dofs(sys.dofmap, mesh, cell);
    for (int i = 0; i < total; ++i) {
      if (dofs[i] < 0) continue;
      for (int j = 0; j < total; ++j) {
        if (dofs[j] < 0 || a_local(i, j) == 0.0) continue;
        triplets.emplace_back(dofs[i], dofs[j], a_local(i, j));
      }
      if (i < 2 * nk) sys.rhs(dofs[i]) += f_local(i);
    }
    const int prow = sys.dofmap.cell_pressure[cell];
    for (int i = 0; i < np; ++i) {
      for (int j = 0; j < total; ++j) {
        if (dofs[j] < 0 || b_local(i, j) == 0.0) continue;
        triplets.emplace_back(prow + i, dofs[j], b_local(i, j));
        triplets.emplace_back(dofs[j], prow + i, b_local(i, j));
      }
      // Mean-value constraint column and its transpose.
      triplets.emplace_back(prow + i, sys.dofmap.multiplier, ops.pressure_moments(i));
      triplets.emplace_back(sys.dofmap.multiplier, prow + i, ops.pressure_moments(i));
    }
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

namespace {

// Static condensation of all cell-local unknowns. Two groups never couple
// across cells: the interior velocity modes (their block is positive definite
// thanks to the permeability mass term) and the non-constant pressure modes
// (jointly with the interior velocities they form an invertible saddle block,
// because interior velocities control every non-constant divergence moment).
// Both groups are eliminated cellwise by dense LU, and only edge traces plus
// one constant pressure mode per cell are factored globally. This is exact
// block Gaussian elimination on the assembled system: the solution is
// identical, but the factored matrix is a fraction of the size with far lower
// fill, which is what keeps the largest refinements inside a desktop memory
// budget.
struct CondensedCell {
  Eigen::FullPivLU<Eigen::MatrixXd> local;  // factor of A[eliminated, eliminated]
  Eigen::MatrixXd coupling;                 // A[eliminated, retained] for this cell
  std::vector<int> eliminated;              // global indices: interior, then pressure modes
  std::vector<int> retained;                // global indices of coupled retained dofs
};

struct CondensedSystem {
  int n = 0;                       // full-system size including the multiplier
  int n_reduced = 0;               // dofs kept after cellwise elimination
  int n_edge = 0;                  // leading reduced dofs: edge traces
  int pin = -1;                    // reduced index of the pinned pressure mode
  std::vector<int> reduced_index;  // global dof -> reduced index, -1 if eliminated
  std::vector<CondensedCell> cells;
  // The reduced system is the saddle pair [[E, C], [C^T, 0]] of the trace
  // block E (positive definite: it is the constrained-extension energy) and
  // the trace/pressure coupling C. Factoring E alone needs no pivoting, so
  // the fill stays mesh-like; the pressure Schur complement C^T E^{-1} C is
  // solved by conjugate gradients preconditioned with cell areas, to which it
  // is spectrally equivalent. This sidesteps sparse elimination of
  // zero-diagonal pressure rows, whose pivoting makes the factors explode.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> edge_block;
  Eigen::SparseMatrix<double> coupling;  // E-dofs by active pressure modes
  Eigen::VectorXd precond;               // cell areas over active pressure modes
  mutable int last_cg_iterations = 0;

  // Solve [[E, C], [C^T, 0]] [t; q] = [g; h] with the pinned mode fixed at
  // zero: q from the Schur complement by preconditioned CG, then t by
  // back-substitution through the factored edge block.
  Eigen::VectorXd solve_reduced(const Eigen::VectorXd &rhs) const {
    const int npres = static_cast<int>(coupling.cols());
    const Eigen::VectorXd g = rhs.head(n_edge);
    Eigen::VectorXd h(npres);
    {
      int at = 0;
      for (int rp = n_edge; rp < n_reduced; ++rp)
        if (rp != pin) h(at++) = rhs(rp);
    }
    const Eigen::VectorXd base = edge_block.solve(g);
    const Eigen::VectorXd target = coupling.transpose() * base - h;

    const auto apply = [&](const Eigen::VectorXd &q) -> Eigen::VectorXd {
      return coupling.transpose() * edge_block.solve(coupling * q);
    };
    Eigen::VectorXd q = Eigen::VectorXd::Zero(npres);
    Eigen::VectorXd residual = target;
    Eigen::VectorXd z = residual.cwiseQuotient(precond);
    Eigen::VectorXd direction = z;
    double rho = residual.dot(z);
    const double stop = std::max(1e-28 * target.squaredNorm(), 1e-300);
    int iterations = 0;
    for (; iterations < 400 && residual.squaredNorm() > stop; ++iterations) {
      const Eigen::VectorXd ad = apply(direction);
      const double alpha = rho / direction.dot(ad);
      q += alpha * direction;
      residual -= alpha * ad;
      z = residual.cwiseQuotient(precond);
      const double rho_next = residual.dot(z);
      direction = z + (rho_next / rho) * direction;
      rho = rho_next;
    }
    last_cg_iterations = iterations;

    const Eigen::VectorXd trace = edge_block.solve(g - coupling * q);
    Eigen::VectorXd out(n_reduced);
    out.head(n_edge) = trace;
    {
      int at = 0;
      for (int rp = n_edge; rp < n_reduced; ++rp) out(rp) = rp == pin ? 0.0 : q(at++);
    }
    return out;
  }

  Eigen::VectorXd gather(const Eigen::VectorXd &v, const std::vector<int> &idx) const {
    Eigen::VectorXd out(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) out(a) = v(idx[a]);
    return out;
  }

  // Forward-eliminate a full-system right-hand side onto the retained dofs.
  // The multiplier entry is dropped (its equation is enforced by recentring
  // the pressure) and the pinned dof's equation becomes "no change".
  Eigen::VectorXd condense_rhs(const Eigen::VectorXd &full) const {
    Eigen::VectorXd reduced(n_reduced);
    for (int g = 0; g < n; ++g)
      if (reduced_index[g] >= 0) reduced(reduced_index[g]) = full(g);
    for (const CondensedCell &cell : cells) {
      const Eigen::VectorXd w = cell.local.solve(gather(full, cell.eliminated));
      const Eigen::VectorXd update = cell.coupling.transpose() * w;
      for (std::size_t a = 0; a < cell.retained.size(); ++a)
        reduced(reduced_index[cell.retained[a]]) -= update(a);
    }
    reduced(pin) = 0.0;
    return reduced;
  }

  // Solve the full system for the given right-hand side. The multiplier
  // component of the result is zero; the pressure comes out in the pinned
  // normalization and is recentred by the caller.
  Eigen::VectorXd solve(const Eigen::VectorXd &full) const {
    const Eigen::VectorXd reduced = solve_reduced(condense_rhs(full));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int g = 0; g < n; ++g)
      if (reduced_index[g] >= 0) x(g) = reduced(reduced_index[g]);
    for (const CondensedCell &cell : cells) {
      Eigen::VectorXd traced(cell.retained.size());
      for (std::size_t a = 0; a < cell.retained.size(); ++a)
        traced(a) = reduced(reduced_index[cell.retained[a]]);
      const Eigen::VectorXd local =
          cell.local.solve(gather(full, cell.eliminated) - cell.coupling * traced);
      for (std::size_t a = 0; a < cell.eliminated.size(); ++a)
        x(cell.eliminated[a]) = local(a);
    }
    return x;
  }
};

void build_condensed(const SaddleSystem &system, CondensedSystem &cond) {
  const Mesh2D &mesh = *system.mesh;
  const int n = system.dofmap.total();
  const int nk2 = 2 * poly_space_dim(system.k);
  const int np = poly_space_dim(system.k - 1);
  const int n_interior = mesh.n_cells() * nk2;

  cond.n = n;
  // Retained dofs: edge traces and one constant pressure mode per cell. The
  // mean-value multiplier is excluded from the factorization because its
  // dense row would wreck any fill-reducing ordering; the pressure nullspace
  // (global constants) is fixed by pinning one cell's constant mode instead.
  // The solution then differs from the constrained one by exactly a constant
  // pressure shift, which the caller's recentring removes.
  cond.reduced_index.assign(n, -1);
  int at = 0;
  for (int g = n_interior; g < system.dofmap.n_u; ++g) cond.reduced_index[g] = at++;
  for (int c = 0; c < mesh.n_cells(); ++c)
    cond.reduced_index[system.dofmap.cell_pressure[c]] = at++;
  cond.n_reduced = at;
  cond.n_edge = system.dofmap.n_u - n_interior;
  cond.pin = cond.reduced_index[system.dofmap.cell_pressure[0]];
  cond.cells.resize(mesh.n_cells());

  std::vector<int> elim_slot(n, -1), ret_slot(n, -1);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    CondensedCell &cell = cond.cells[c];
    for (int i = 0; i < nk2; ++i) cell.eliminated.push_back(c * nk2 + i);
    for (int i = 1; i < np; ++i) cell.eliminated.push_back(system.dofmap.cell_pressure[c] + i);
    for (const int dof : cell_global_dofs(system.dofmap, mesh, c))
      if (dof >= n_interior) cell.retained.push_back(dof);
    cell.retained.push_back(system.dofmap.cell_pressure[c]);
    for (std::size_t a = 0; a < cell.eliminated.size(); ++a)
      elim_slot[cell.eliminated[a]] = static_cast<int>(a);
    for (std::size_t a = 0; a < cell.retained.size(); ++a)
      ret_slot[cell.retained[a]] = static_cast<int>(a);

    const int ne = static_cast<int>(cell.eliminated.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(ne, ne);
    cell.coupling = Eigen::MatrixXd::Zero(ne, static_cast<int>(cell.retained.size()));
    for (int jl = 0; jl < ne; ++jl) {
      const int j = cell.eliminated[jl];
      for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, j); it; ++it) {
        const int i = static_cast<int>(it.row());
        if (elim_slot[i] >= 0) {
          local(elim_slot[i], jl) = it.value();
        } else if (ret_slot[i] >= 0) {
          // Symmetry: A[retained, eliminated] entries define the coupling.
          cell.coupling(jl, ret_slot[i]) = it.value();
        }
        // The only other row an eliminated column can touch is the mean-value
        // multiplier, whose equation is enforced by recentring instead.
      }
    }
    cell.local.compute(local);
    if (!cell.local.isInvertible())
      throw std::runtime_error("solve: cell-local elimination block is singular");

    const Eigen::MatrixXd folded = cell.coupling.transpose() * cell.local.solve(cell.coupling);
    for (std::size_t a = 0; a < cell.retained.size(); ++a) {
      const int ra = cond.reduced_index[cell.retained[a]];
      if (ra != cond.pin) {
        for (std::size_t b = 0; b < cell.retained.size(); ++b) {
          const int rb = cond.reduced_index[cell.retained[b]];
          if (rb == cond.pin) continue;
          triplets.emplace_back(ra, rb, -folded(a, b));
        }
      }
    }
    for (const int dof : cell.eliminated) elim_slot[dof] = -1;
    for (const int dof : cell.retained) ret_slot[dof] = -1;
  }
  // Retained-by-retained part of the assembled matrix, minus the multiplier
  // row/column and everything touching the pinned dof.
  for (int j = n_interior; j < n - 1; ++j) {
    const int rj = cond.reduced_index[j];
    if (rj < 0 || rj == cond.pin) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, j); it; ++it) {
      const int ri = cond.reduced_index[it.row()];
      if (ri < 0 || ri == cond.pin) continue;
      triplets.emplace_back(ri, rj, it.value());
    }
  }
  // Partition the reduced matrix into the trace block, the trace/pressure
  // coupling, and the (identically zero) pressure block. Active pressure
  // columns skip the pinned mode.
  std::vector<int> pressure_col(cond.n_reduced, -1);
  int npres = 0;
  for (int rp = cond.n_edge; rp < cond.n_reduced; ++rp)
    if (rp != cond.pin) pressure_col[rp] = npres++;

  std::vector<Eigen::Triplet<double>> edge_trip, coupling_trip;
  for (const auto &t : triplets) {
    if (t.row() < cond.n_edge && t.col() < cond.n_edge)
      edge_trip.emplace_back(t.row(), t.col(), t.value());
    else if (t.row() < cond.n_edge && pressure_col[t.col()] >= 0)
      coupling_trip.emplace_back(t.row(), pressure_col[t.col()], t.value());
    // Pressure-by-pressure entries are roundoff shadows of an exactly zero
    // block; dropping them keeps the Schur operator clean and the outer
    // refinement absorbs their (sub-1e-30) effect.
  }
  triplets.clear();
  triplets.shrink_to_fit();

  Eigen::SparseMatrix<double> edge_matrix(cond.n_edge, cond.n_edge);
  edge_matrix.setFromTriplets(edge_trip.begin(), edge_trip.end());
  edge_matrix.makeCompressed();
  cond.coupling.resize(cond.n_edge, npres);
  cond.coupling.setFromTriplets(coupling_trip.begin(), coupling_trip.end());
  cond.coupling.makeCompressed();

  cond.precond.resize(npres);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int rp = cond.reduced_index[system.dofmap.cell_pressure[c]];
    if (pressure_col[rp] >= 0) cond.precond(pressure_col[rp]) = mesh.cell_area(c);
  }

  cond.edge_block.compute(edge_matrix);
  if (cond.edge_block.info() != Eigen::Success)
    throw std::runtime_error("solve: trace-block factorization failed");
  if (std::getenv("WGB_SOLVER_STATS") != nullptr)
    std::fprintf(stderr,
                 "solver stats: full=%d reduced=%d edge=%d pressures=%d edge_nnz=%ld "
                 "factor_nnz=%ld\n",
                 n, cond.n_reduced, cond.n_edge, npres,
                 static_cast<long>(edge_matrix.nonZeros()),
                 static_cast<long>(cond.edge_block.matrixL().nestedExpression().nonZeros()));
}

}  // namespace

WGSolution solve(const SaddleSystem &system) {
  if (system.mesh == nullptr) throw std::invalid_argument("solve: system has no mesh");
  const Mesh2D &mesh = *system.mesh;
  const int n = system.dofmap.total();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  double residual = 0.0;
  const double rhs_norm = system.rhs.lpNorm<Eigen::Infinity>();
  if (rhs_norm > 0.0) {
    const int npc = poly_space_dim(system.k - 1);
    double area = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) area += mesh.cell_area(c);
    // Shift the pressure to zero mean; the constrained system's solution has
    // this normalization (and multiplier zero), so the full-matrix residual
    // below is meaningful.
    const auto recenter = [&](Eigen::VectorXd &v) {
      double mean = 0.0;
      for (int c = 0; c < mesh.n_cells(); ++c)
        mean +=
            system.pressure_moments[c].dot(v.segment(system.dofmap.cell_pressure[c], npc));
      mean /= area;
      for (int c = 0; c < mesh.n_cells(); ++c) v(system.dofmap.cell_pressure[c]) -= mean;
    };

    CondensedSystem cond;
    build_condensed(system, cond);
    const bool stats = std::getenv("WGB_SOLVER_STATS") != nullptr;
    x = cond.solve(system.rhs);
    recenter(x);
    // Iterative refinement against the full matrix tightens the residual to
    // near the rounding level of the assembly.
    residual = (system.rhs - system.matrix * x).lpNorm<Eigen::Infinity>() / rhs_norm;
    if (stats)
      std::fprintf(stderr, "solver stats: cg_iterations=%d residual=%.3e\n",
                   cond.last_cg_iterations, residual);
    for (int pass = 0; pass < 6 && residual > 1e-13; ++pass) {
      const Eigen::VectorXd defect = system.rhs - system.matrix * x;
      Eigen::VectorXd candidate = x + cond.solve(defect);
      recenter(candidate);
      const double improved =
          (system.rhs - system.matrix * candidate).lpNorm<Eigen::Infinity>() / rhs_norm;
      if (stats)
        std::fprintf(stderr, "solver stats: refine pass=%d cg_iterations=%d residual=%.3e\n",
                     pass, cond.last_cg_iterations, improved);
      if (improved >= residual) break;
      x = candidate;
      residual = improved;
    }
  }

  WGSolution sol;
  sol.raw = x;
  sol.residual = residual;
  sol.velocity = zero_field(mesh, system.k);
  const int nk2 = 2 * poly_space_dim(system.k);
  const int ne2 = 2 * (system.k + 1);
  for (int c = 0; c < mesh.n_cells(); ++c)
    sol.velocity.interior[c] = x.segment(system.dofmap.cell_interior[c], nk2);
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (system.dofmap.edge_offset[e] >= 0)
      sol.velocity.edge[e] = x.segment(system.dofmap.edge_offset[e], ne2);

  const int np = poly_space_dim(system.k - 1);
  sol.pressure.resize(mesh.n_cells());
  double mean = 0.0, area = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    sol.pressure[c] = x.segment(system.dofmap.cell_pressure[c], np);
    mean += system.pressure_moments[c].dot(sol.pressure[c]);
    area += mesh.cell_area(c);
  }
  mean /= area;
  // The leading pressure basis function is the constant 1, so shifting its
  // coefficient recenters the field.
  for (int c = 0; c < mesh.n_cells(); ++c) sol.pressure[c](0) -= mean;
  sol.multiplier = x(system.dofmap.multiplier);
  return sol;
}

double eval_pressure(const WGSolution &solution, const Mesh2D &mesh, int cell, const Vec2 &x) {
  const int k = solution.velocity.k;
  const CellBasis basis = make_cell_basis(mesh, cell, k - 1);
  return basis.eval(x).dot(solution.pressure[cell]);
}

void write_coo(const Eigen::SparseMatrix<double> &matrix, std::ostream &out) {
  struct Entry {
    int row, col;
    double value;
  };
  std::vector<Entry> entries;
  entries.reserve(matrix.nonZeros());
  for (int outer = 0; outer < matrix.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, outer); it; ++it)
      entries.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
  std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << entries.size() << '\n';
  char buf[96];
  for (const Entry &e : entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", e.row, e.col, e.value);
    out << buf;
  }
}

}  // namespace wgb
