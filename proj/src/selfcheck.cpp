#include "wgb/selfcheck.hpp"

#include "wgb/verify.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace wgb {

namespace {

using CheckFn = std::function<std::optional<std::string>(std::mt19937_64 &)>;

// Global bivariate polynomial with analytic derivatives, used to probe the
// lifting operators with fields whose gradient and divergence are known.
struct Poly2 {
  int degree = 0;
  Eigen::VectorXd coeff;  // monomial_index order, centered at the origin

  double eval(const Vec2 &p) const {
    const CellBasis basis(Vec2::Zero(), 1.0, degree);
    return basis.eval(p).dot(coeff);
  }
  Poly2 derivative(int dir) const {
    Poly2 out;
    out.degree = std::max(degree - 1, 0);
    out.coeff = Eigen::VectorXd::Zero(poly_space_dim(out.degree));
    for (int i = 0; i < coeff.size(); ++i) {
      auto [a, b] = monomial_exponents(i);
      if (dir == 0 && a > 0) out.coeff(monomial_index(a - 1, b)) += a * coeff(i);
      if (dir == 1 && b > 0) out.coeff(monomial_index(a, b - 1)) += b * coeff(i);
    }
    return out;
  }
  static Poly2 random(int degree, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Poly2 p;
    p.degree = degree;
    p.coeff.resize(poly_space_dim(degree));
    for (int i = 0; i < p.coeff.size(); ++i) p.coeff(i) = unit(rng);
    return p;
  }
};

std::optional<std::string> fail(const std::string &msg) { return msg; }

std::optional<std::string> check_mesh_families(std::mt19937_64 &) {
  for (MeshFamilyKind family : {MeshFamilyKind::UniformTriangle, MeshFamilyKind::NonconvexPolygon}) {
    double prev_h = 0.0;
    for (int level = 0; level <= 3; ++level) {
      const Mesh2D mesh = build_mesh(family, level);
      const auto issues = validate_mesh(mesh);
      if (!issues.empty())
        return fail(family_name(family) + " level " + std::to_string(level) + ": " + issues.front());
      const int n = 1 << level;
      if (mesh.n_cells() != 2 * n * n)
        return fail(family_name(family) + ": unexpected cell count");
      const double h = mesh_metrics(mesh).h;
      const double expected =
          family == MeshFamilyKind::UniformTriangle ? std::sqrt(2.0) / n : std::sqrt(5.0) / (2 * n);
      if (std::abs(h - expected) > 1e-12) return fail(family_name(family) + ": unexpected h");
      if (level > 0 && std::abs(h - 0.5 * prev_h) > 1e-12)
        return fail(family_name(family) + ": h does not halve between levels");
      prev_h = h;
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_quadrature(std::mt19937_64 &) {
  // Unit square as a 4-gon: every monomial up to degree 10 must integrate to
  // 1 / ((a+1)(b+1)).
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int degree = 0; degree <= 10; ++degree) {
    const QuadRule rule = polygon_rule(square, degree);
    if (rule.weights.minCoeff() <= 0.0) return fail("square rule has non-positive weights");
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double sum = 0.0;
        for (int q = 0; q < rule.weights.size(); ++q)
          sum += rule.weights(q) * std::pow(rule.points(q, 0), a) * std::pow(rule.points(q, 1), b);
        const double exact = 1.0 / ((a + 1.0) * (b + 1.0));
        if (std::abs(sum - exact) > 1e-13 * std::max(1.0, exact))
          return fail("square monomial integral off at degree " + std::to_string(a + b));
      }
    }
  }
  // Non-convex cell: weights positive and total weight equals the cell area.
  const Mesh2D mesh = build_nonconvex_polygon_mesh(1);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const QuadRule rule = cell_rule(mesh, cell, 8);
    if (rule.weights.minCoeff() <= 0.0) return fail("non-convex cell rule has non-positive weights");
    if (std::abs(rule.total_weight() - mesh.cell_area(cell)) > 1e-14)
      return fail("non-convex cell rule does not reproduce the cell area");
  }
  return std::nullopt;
}

std::optional<std::string> check_lifting_consistency(std::mt19937_64 &rng) {
  for (MeshFamilyKind family : {MeshFamilyKind::UniformTriangle, MeshFamilyKind::NonconvexPolygon}) {
    const Mesh2D mesh = build_mesh(family, 2);
    std::uniform_int_distribution<int> pick_cell(0, mesh.n_cells() - 1);
    for (int k = 1; k <= 3; ++k) {
      for (int trial = 0; trial < 5; ++trial) {
        const Poly2 p1 = Poly2::random(k, rng), p2 = Poly2::random(k, rng);
        const Poly2 d1x = p1.derivative(0), d1y = p1.derivative(1);
        const Poly2 d2x = p2.derivative(0), d2y = p2.derivative(1);
        auto u = [&](const Vec2 &x) -> Vec2 { return {p1.eval(x), p2.eval(x)}; };
        auto grad = [&](const Vec2 &x) {
          Eigen::Matrix2d g;
          g << d1x.eval(x), d1y.eval(x), d2x.eval(x), d2y.eval(x);
          return g;
        };
        auto div = [&](const Vec2 &x) { return d1x.eval(x) + d2y.eval(x); };
        const int cell = pick_cell(rng);
        const double defect = commutativity_defect_cell(u, grad, div, mesh, cell, k);
        if (!(defect < 1e-10)) {
          std::ostringstream os;
          os << family_name(family) << " k=" << k << " cell " << cell << ": defect " << defect;
          return fail(os.str());
        }
      }
    }
  }
  return std::nullopt;
}

WGField random_field(const Mesh2D &mesh, int k, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  WGField f = zero_field(mesh, k);
  for (auto &v : f.interior)
    for (int i = 0; i < v.size(); ++i) v(i) = unit(rng);
  for (auto &v : f.edge)
    for (int i = 0; i < v.size(); ++i) v(i) = unit(rng);
  return f;
}

std::optional<std::string> check_norm_axioms(std::mt19937_64 &rng) {
  const Mesh2D mesh = build_nonconvex_polygon_mesh(1);
  const int k = 2, r = 1;
  const auto kinv = uniform_kappa_inv(mesh, 1.0);
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const WGField a = random_field(mesh, k, rng);
    const WGField b = random_field(mesh, k, rng);
    const double na = energy_norm(a, mesh, r, kinv);
    const double nb = energy_norm(b, mesh, r, kinv);
    if (!(na > 0.0)) return fail("norm of a random nonzero field is not positive");
    const double s = scale(rng);
    WGField scaled = a;
    for (auto &v : scaled.interior) v *= s;
    for (auto &v : scaled.edge) v *= s;
    if (std::abs(energy_norm(scaled, mesh, r, kinv) - std::abs(s) * na) > 1e-12 * (1.0 + na))
      return fail("norm is not absolutely homogeneous");
    WGField sum = a;
    for (size_t c = 0; c < sum.interior.size(); ++c) sum.interior[c] += b.interior[c];
    for (size_t e = 0; e < sum.edge.size(); ++e) sum.edge[e] += b.edge[e];
    if (energy_norm(sum, mesh, r, kinv) > na + nb + 1e-12 * (na + nb))
      return fail("triangle inequality violated");
  }
  const double zero = energy_norm(zero_field(mesh, k), mesh, r, kinv);
  if (zero != 0.0) return fail("norm of the zero field is nonzero");
  return std::nullopt;
}

std::optional<std::string> check_zero_rhs(std::mt19937_64 &) {
  for (bool stabilized : {true, false}) {
    const Mesh2D mesh = build_uniform_triangle_mesh(2);
    const int k = 1, r = default_lifting_degree(k, stabilized);
    BrinkmanProblem problem;
    problem.source = [](const Vec2 &) -> Vec2 { return {0.0, 0.0}; };
    problem.kappa_inv = uniform_kappa_inv(mesh, 1.0);
    const SaddleSystem sys = assemble_system(mesh, k, r, stabilized, problem);
    const WGSolution sol = solve(sys);
    if (sol.raw.lpNorm<Eigen::Infinity>() != 0.0)
      return fail("zero right-hand side did not produce the zero solution");
  }
  return std::nullopt;
}

std::optional<std::string> check_small_solve(std::mt19937_64 &) {
  const BrinkmanCase exact = brinkman_benchmark(1.0);
  struct Config {
    MeshFamilyKind family;
    int level, k;
    bool stabilized;
  };
  for (const Config &cfg : {Config{MeshFamilyKind::UniformTriangle, 2, 1, true},
                            Config{MeshFamilyKind::NonconvexPolygon, 1, 1, false}}) {
    const Mesh2D mesh = build_mesh(cfg.family, cfg.level);
    const int r = default_lifting_degree(cfg.k, cfg.stabilized);
    BrinkmanProblem problem;
    problem.source = exact.source;
    problem.kappa_inv = uniform_kappa_inv(mesh, 1.0);
    problem.source_exactness = data_exactness(cfg.k, r);
    const WGSolution sol = solve(assemble_system(mesh, cfg.k, r, cfg.stabilized, problem));
    if (!(sol.residual < 1e-10)) return fail("linear solve residual too large");
    if (!(max_discrete_divergence(sol, mesh) < 1e-9))
      return fail("discrete divergence of the solve is not zero");
    const ErrorTriple err = compute_errors(sol, exact, mesh, r);
    if (!std::isfinite(err.velocity_l2) || !std::isfinite(err.energy) ||
        !std::isfinite(err.pressure_l2))
      return fail("error norms are not finite");
    if (!(err.velocity_l2 < 1.0 && err.energy < 5.0 && err.pressure_l2 < 1.0))
      return fail("coarse-mesh errors unexpectedly large");
  }
  return std::nullopt;
}

std::optional<std::string> check_mesh_roundtrip(std::mt19937_64 &) {
  const Mesh2D mesh = build_nonconvex_polygon_mesh(2);
  std::stringstream buffer;
  mesh.write_text(buffer);
  const Mesh2D copy = Mesh2D::read_text(buffer);
  if (copy.n_vertices() != mesh.n_vertices() || copy.n_cells() != mesh.n_cells() ||
      copy.n_edges() != mesh.n_edges() || copy.level() != mesh.level())
    return fail("round-trip changed mesh sizes");
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.vertex(v) != copy.vertex(v)) return fail("round-trip changed vertex coordinates");
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto a = mesh.cell(c), b = copy.cell(c);
    if (!std::equal(a.begin(), a.end(), b.begin(), b.end()))
      return fail("round-trip changed cell connectivity");
  }
  return std::nullopt;
}

}  // namespace

int run_selfcheck(std::ostream &out, std::uint64_t seed) {
  const std::vector<std::pair<std::string, CheckFn>> groups = {
      {"mesh-families", check_mesh_families},
      {"quadrature-exactness", check_quadrature},
      {"lifting-consistency", check_lifting_consistency},
      {"energy-norm-axioms", check_norm_axioms},
      {"zero-rhs-solve", check_zero_rhs},
      {"benchmark-solve", check_small_solve},
      {"mesh-roundtrip", check_mesh_roundtrip},
  };
  int failures = 0;
  for (const auto &[name, fn] : groups) {
    std::mt19937_64 rng(seed ^ std::hash<std::string>{}(name));
    std::optional<std::string> error;
    try {
      error = fn(rng);
    } catch (const std::exception &e) {
      error = std::string("exception: ") + e.what();
    }
    if (error) {
      out << "FAIL " << name << ": " << *error << "\n";
      ++failures;
    } else {
      out << "PASS " << name << "\n";
    }
  }
  return failures;
}

}  // namespace wgb
