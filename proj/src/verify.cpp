#include "wgb/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace wgb {

namespace {

// Stream-function factors and their derivatives; note A' = 2B.
double fa(double t) { return t * t - 2.0 * t * t * t + t * t * t * t; }
double fb(double t) { return t - 3.0 * t * t + 2.0 * t * t * t; }
double fb1(double t) { return 1.0 - 6.0 * t + 6.0 * t * t; }
double fa2(double t) { return 2.0 - 12.0 * t + 12.0 * t * t; }
double fb2(double t) { return -6.0 + 12.0 * t; }

}  // namespace

BrinkmanCase brinkman_benchmark(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("brinkman_benchmark: kappa must be positive");
  BrinkmanCase c;
  c.kappa = kappa;
  c.velocity = [](const Vec2 &p) -> Vec2 {
    return {8.0 * fa(p.x()) * fb(p.y()), -8.0 * fb(p.x()) * fa(p.y())};
  };
  c.velocity_gradient = [](const Vec2 &p) {
    Eigen::Matrix2d g;
    g(0, 0) = 16.0 * fb(p.x()) * fb(p.y());
    g(0, 1) = 8.0 * fa(p.x()) * fb1(p.y());
    g(1, 0) = -8.0 * fb1(p.x()) * fa(p.y());
    g(1, 1) = -16.0 * fb(p.x()) * fb(p.y());
    return g;
  };
  c.divergence = [](const Vec2 &) { return 0.0; };
  c.pressure = [](const Vec2 &p) {
    const double t = p.x() - 0.5;
    return t * t * t;
  };
  c.source = [kappa](const Vec2 &p) -> Vec2 {
    const double x = p.x(), y = p.y();
    const double u1 = 8.0 * fa(x) * fb(y);
    const double u2 = -8.0 * fb(x) * fa(y);
    const double lap1 = 8.0 * (fa2(x) * fb(y) + fa(x) * fb2(y));
    const double lap2 = -8.0 * (fb2(x) * fa(y) + fb(x) * fa2(y));
    const double px = 3.0 * (x - 0.5) * (x - 0.5);
    return {-lap1 + u1 / kappa + px, -lap2 + u2 / kappa};
  };
  return c;
}

double energy_norm(const WGField &field, const Mesh2D &mesh, int r,
                   const std::vector<Eigen::Matrix2d> &kappa_inv) {
  if (static_cast<int>(kappa_inv.size()) != mesh.n_cells())
    throw std::invalid_argument("energy_norm: one permeability matrix per cell required");
  const int k = field.k;
  const int nk = poly_space_dim(k);
  const int nr = poly_space_dim(r);
  double sq = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const ElementOps ops = build_element_ops(mesh, cell, k, r);
    const Eigen::VectorXd local = gather_local(field, mesh, cell);
    for (int block = 0; block < 4; ++block) {
      const Eigen::VectorXd lifted = ops.gradient.middleRows(block * nr, nr) * local;
      sq += lifted.dot(ops.mass_r * lifted);
    }
    const Eigen::Matrix2d &ki = kappa_inv[cell];
    for (int c1 = 0; c1 < 2; ++c1)
      for (int c2 = 0; c2 < 2; ++c2)
        sq += ki(c1, c2) * local.segment(ops.layout.interior(c1, 0), nk)
                               .dot(ops.mass_k * local.segment(ops.layout.interior(c2, 0), nk));
    sq += local.dot(ops.stabilizer * local);
  }
  return std::sqrt(sq);
}

ErrorTriple compute_errors(const WGSolution &solution, const BrinkmanCase &exact,
                           const Mesh2D &mesh, int r) {
  const int k = solution.velocity.k;
  const int q = std::max(data_exactness(k, r), 2 * k + 4);

  const WGField projected = project_field(exact.velocity, mesh, k, q);
  const WGField diff = field_difference(projected, solution.velocity);

  ErrorTriple err;
  double l2_sq = 0.0, p_sq = 0.0;
  const int nk = poly_space_dim(k);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellBasis basis_k = make_cell_basis(mesh, cell, k);
    const QuadRule rule = cell_rule(mesh, cell, q);
    const Eigen::MatrixXd mass = mass_matrix(basis_k, rule);
    for (int comp = 0; comp < 2; ++comp) {
      const auto coeffs = diff.interior[cell].segment(comp * nk, nk);
      l2_sq += coeffs.dot(mass * coeffs);
    }
    const CellBasis basis_p = make_cell_basis(mesh, cell, k - 1);
    const Eigen::MatrixXd vp = basis_p.values(rule);
    const Eigen::VectorXd ph = vp * solution.pressure[cell];
    for (int i = 0; i < rule.weights.size(); ++i) {
      const double d = exact.pressure(rule.points.row(i).transpose()) - ph(i);
      p_sq += rule.weights(i) * d * d;
    }
  }
  err.velocity_l2 = std::sqrt(l2_sq);
  err.pressure_l2 = std::sqrt(p_sq);
  err.energy = energy_norm(diff, mesh, r, uniform_kappa_inv(mesh, exact.kappa));
  return err;
}

double max_discrete_divergence(const WGSolution &solution, const Mesh2D &mesh) {
  const int k = solution.velocity.k;
  double worst = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const ElementOps ops = build_element_ops(mesh, cell, k, k - 1);
    const Eigen::VectorXd local = gather_local(solution.velocity, mesh, cell);
    worst = std::max(worst, (ops.divergence * local).cwiseAbs().maxCoeff());
  }
  return worst;
}

ConvergenceReport run_convergence(MeshFamilyKind family, int k, int r, bool stabilized,
                                  int level_begin, int level_end, double kappa) {
  if (level_begin < 0 || level_end < level_begin)
    throw std::invalid_argument("run_convergence: bad level range");
  ConvergenceReport report;
  report.family = family;
  report.k = k;
  report.r = r;
  report.stabilized = stabilized;
  report.kappa = kappa;

  const BrinkmanCase exact = brinkman_benchmark(kappa);
  for (int level = level_begin; level <= level_end; ++level) {
    const Mesh2D mesh = build_mesh(family, level);
    BrinkmanProblem problem;
    problem.source = exact.source;
    problem.kappa_inv = uniform_kappa_inv(mesh, kappa);
    problem.source_exactness = data_exactness(k, r);
    const SaddleSystem system = assemble_system(mesh, k, r, stabilized, problem);
    const WGSolution solution = solve(system);

    ConvergenceRow row;
    row.level = level;
    row.h = mesh_metrics(mesh).h;
    row.error = compute_errors(solution, exact, mesh, r);
    row.residual = solution.residual;
    row.max_divergence = max_discrete_divergence(solution, mesh);
    if (!report.rows.empty()) {
      const ErrorTriple &prev = report.rows.back().error;
      const auto rate = [](double a, double b) {
        return (a > 0.0 && b > 0.0) ? std::log2(a / b) : 0.0;
      };
      row.rate = {rate(prev.velocity_l2, row.error.velocity_l2),
                  rate(prev.energy, row.error.energy),
                  rate(prev.pressure_l2, row.error.pressure_l2)};
      row.has_rate = true;
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

std::string describe_config(const ConvergenceReport &r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "family=%s k=%d r=%d mode=%s kappa=%.12g",
                family_name(r.family).c_str(), r.k, r.r, r.stabilized ? "stab" : "sf", r.kappa);
  return buf;
}

}  // namespace

void write_csv(const ConvergenceReport &report, std::ostream &out) {
  out << "# wgbrinkman convergence study\n";
  out << "# " << describe_config(report) << "\n";
  out << "level,h,e_l2u,rate_l2u,e_energy,rate_energy,e_p,rate_p\n";
  char buf[256];
  for (const ConvergenceRow &row : report.rows) {
    char r0[32] = "", r1[32] = "", r2[32] = "";
    if (row.has_rate) {
      std::snprintf(r0, sizeof(r0), "%.6f", row.rate[0]);
      std::snprintf(r1, sizeof(r1), "%.6f", row.rate[1]);
      std::snprintf(r2, sizeof(r2), "%.6f", row.rate[2]);
    }
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12e,%s,%.12e,%s,%.12e,%s\n", row.level, row.h,
                  row.error.velocity_l2, r0, row.error.energy, r1, row.error.pressure_l2, r2);
    out << buf;
  }
}

void write_table(const ConvergenceReport &report, std::ostream &out) {
  out << "config: " << describe_config(report) << "\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%5s %10s %10s %6s %10s %6s %10s %6s\n", "level", "h", "|u-uh|0",
                "rate", "energy", "rate", "|p-ph|0", "rate");
  out << buf;
  for (const ConvergenceRow &row : report.rows) {
    char rates[3][16];
    for (int i = 0; i < 3; ++i) {
      if (row.has_rate)
        std::snprintf(rates[i], sizeof(rates[i]), "%.2f", row.rate[i]);
      else
        std::snprintf(rates[i], sizeof(rates[i]), "--");
    }
    std::snprintf(buf, sizeof(buf), "%5d %10s %10s %6s %10s %6s %10s %6s\n", row.level,
                  format_scientific3(row.h).c_str(),
                  format_scientific3(row.error.velocity_l2).c_str(), rates[0],
                  format_scientific3(row.error.energy).c_str(), rates[1],
                  format_scientific3(row.error.pressure_l2).c_str(), rates[2]);
    out << buf;
  }
}

std::string format_scientific3(double value) {
  if (value == 0.0 || !std::isfinite(value)) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return "0.000E+0";
  }
  const char *sign = value < 0 ? "-" : "";
  const double a = std::abs(value);
  int e = static_cast<int>(std::floor(std::log10(a))) + 1;
  long mantissa = std::lround(a / std::pow(10.0, e) * 1000.0);
  if (mantissa >= 1000) {
    mantissa = 100;
    e += 1;
  }
  if (mantissa < 100) {  // log10 rounding put the mantissa just below 0.1
    e -= 1;
    mantissa = std::lround(a / std::pow(10.0, e) * 1000.0);
    if (mantissa >= 1000) {
      mantissa = 100;
      e += 1;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s0.%03ldE%+d", sign, mantissa, e);
  return buf;
}

}  // namespace wgb
