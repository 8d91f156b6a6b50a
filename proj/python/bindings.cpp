// Python bindings for the weak Galerkin Brinkman solver: mesh construction,
// single solves, convergence studies, benchmark data, and the self-check.
#include "wgb/mesh.hpp"
#include "wgb/selfcheck.hpp"
#include "wgb/system.hpp"
#include "wgb/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>

namespace py = pybind11;
using namespace wgb;

namespace {

struct ResolvedMode {
  bool stabilized = true;
  int r = 0;
};

ResolvedMode resolve_mode(int k, const std::string &mode, int lifting) {
  ResolvedMode out;
  if (mode == "stab")
    out.stabilized = true;
  else if (mode == "sf")
    out.stabilized = false;
  else
    throw std::invalid_argument("mode must be 'stab' or 'sf'");
  out.r = lifting >= 0 ? lifting : default_lifting_degree(k, out.stabilized);
  if (out.r < k - 1) throw std::invalid_argument("lifting degree must be at least k-1");
  return out;
}

py::dict row_to_dict(const ConvergenceRow &row) {
  py::dict d;
  d["level"] = row.level;
  d["h"] = row.h;
  d["velocity_l2_error"] = row.error.velocity_l2;
  d["energy_error"] = row.error.energy;
  d["pressure_l2_error"] = row.error.pressure_l2;
  if (row.has_rate) {
    d["velocity_l2_rate"] = row.rate[0];
    d["energy_rate"] = row.rate[1];
    d["pressure_l2_rate"] = row.rate[2];
  } else {
    d["velocity_l2_rate"] = py::none();
    d["energy_rate"] = py::none();
    d["pressure_l2_rate"] = py::none();
  }
  d["residual"] = row.residual;
  d["max_divergence"] = row.max_divergence;
  return d;
}

py::dict solve_brinkman(const std::string &family, int level, int k, const std::string &mode,
                        double kappa, int lifting) {
  const ResolvedMode rm = resolve_mode(k, mode, lifting);
  const Mesh2D mesh = build_mesh(parse_family(family), level);
  const BrinkmanCase exact = brinkman_benchmark(kappa);
  BrinkmanProblem problem;
  problem.source = exact.source;
  problem.kappa_inv = uniform_kappa_inv(mesh, kappa);
  problem.source_exactness = data_exactness(k, rm.r);
  const SaddleSystem system = assemble_system(mesh, k, rm.r, rm.stabilized, problem);
  const WGSolution solution = solve(system);
  const ErrorTriple error = compute_errors(solution, exact, mesh, rm.r);

  py::dict d;
  d["family"] = family;
  d["level"] = level;
  d["k"] = k;
  d["r"] = rm.r;
  d["mode"] = mode;
  d["kappa"] = kappa;
  d["cells"] = mesh.n_cells();
  d["edges"] = mesh.n_edges();
  d["velocity_dofs"] = system.dofmap.n_u;
  d["pressure_dofs"] = system.dofmap.n_p;
  d["total_dofs"] = system.dofmap.total();
  d["residual"] = solution.residual;
  d["max_divergence"] = max_discrete_divergence(solution, mesh);
  d["velocity_l2_error"] = error.velocity_l2;
  d["energy_error"] = error.energy;
  d["pressure_l2_error"] = error.pressure_l2;
  return d;
}

ConvergenceReport run_study(const std::string &family, int k, const std::string &mode,
                            int level_begin, int level_end, double kappa, int lifting) {
  const ResolvedMode rm = resolve_mode(k, mode, lifting);
  return run_convergence(parse_family(family), k, rm.r, rm.stabilized, level_begin, level_end,
                         kappa);
}

py::list convergence(const std::string &family, int k, const std::string &mode, int level_begin,
                     int level_end, double kappa, int lifting) {
  const ConvergenceReport report = run_study(family, k, mode, level_begin, level_end, kappa, lifting);
  py::list rows;
  for (const ConvergenceRow &row : report.rows) rows.append(row_to_dict(row));
  return rows;
}

std::string convergence_csv(const std::string &family, int k, const std::string &mode,
                            int level_begin, int level_end, double kappa, int lifting) {
  const ConvergenceReport report = run_study(family, k, mode, level_begin, level_end, kappa, lifting);
  std::ostringstream out;
  write_csv(report, out);
  return out.str();
}

py::dict selfcheck(unsigned long long seed) {
  std::ostringstream log;
  const int failures = run_selfcheck(log, seed);
  py::dict d;
  d["failures"] = failures;
  d["log"] = log.str();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weak Galerkin solver for the 2D Brinkman equations on polygonal meshes";

  py::class_<MeshMetrics>(m, "MeshMetrics")
      .def_readonly("h", &MeshMetrics::h)
      .def_readonly("min_edge", &MeshMetrics::min_edge)
      .def_readonly("cell_count", &MeshMetrics::cell_count)
      .def_readonly("edge_count", &MeshMetrics::edge_count);

  py::class_<Mesh2D>(m, "Mesh")
      .def_property_readonly("n_vertices", &Mesh2D::n_vertices)
      .def_property_readonly("n_cells", &Mesh2D::n_cells)
      .def_property_readonly("n_edges", &Mesh2D::n_edges)
      .def_property_readonly("level", &Mesh2D::level)
      .def("cell_area", &Mesh2D::cell_area, py::arg("cell"))
      .def("metrics", [](const Mesh2D &mesh) { return mesh_metrics(mesh); })
      .def("validate", [](const Mesh2D &mesh) { return validate_mesh(mesh); })
      .def("to_text",
           [](const Mesh2D &mesh) {
             std::ostringstream out;
             mesh.write_text(out);
             return out.str();
           })
      .def_static("from_text", [](const std::string &text) {
        std::istringstream in(text);
        return Mesh2D::read_text(in);
      });

  m.def(
      "build_mesh",
      [](const std::string &family, int level) { return build_mesh(parse_family(family), level); },
      py::arg("family"), py::arg("level"),
      "Build a mesh of the unit square; family is 'tri' or 'poly'.");

  m.def("solve_brinkman", &solve_brinkman, py::arg("family"), py::arg("level"), py::arg("k"),
        py::arg("mode") = "stab", py::arg("kappa") = 1.0, py::arg("lifting") = -1,
        "Solve the manufactured benchmark problem once and report errors.");

  m.def("convergence", &convergence, py::arg("family"), py::arg("k"), py::arg("mode") = "stab",
        py::arg("level_begin") = 1, py::arg("level_end") = 3, py::arg("kappa") = 1.0,
        py::arg("lifting") = -1, "Run a refinement study; returns one dict per level.");

  m.def("convergence_csv", &convergence_csv, py::arg("family"), py::arg("k"),
        py::arg("mode") = "stab", py::arg("level_begin") = 1, py::arg("level_end") = 3,
        py::arg("kappa") = 1.0, py::arg("lifting") = -1,
        "Run a refinement study and return the CSV report as a string.");

  m.def(
      "benchmark_velocity",
      [](double x, double y) {
        const BrinkmanCase c = brinkman_benchmark(1.0);
        const Vec2 u = c.velocity({x, y});
        return py::make_tuple(u(0), u(1));
      },
      py::arg("x"), py::arg("y"), "Exact benchmark velocity at a point.");

  m.def(
      "benchmark_pressure",
      [](double x, double y) {
        const BrinkmanCase c = brinkman_benchmark(1.0);
        return c.pressure({x, y});
      },
      py::arg("x"), py::arg("y"), "Exact benchmark pressure at a point.");

  m.def(
      "benchmark_source",
      [](double x, double y, double kappa) {
        const BrinkmanCase c = brinkman_benchmark(kappa);
        const Vec2 f = c.source({x, y});
        return py::make_tuple(f(0), f(1));
      },
      py::arg("x"), py::arg("y"), py::arg("kappa") = 1.0,
      "Benchmark momentum source at a point for permeability kappa.");

  m.def("selfcheck", &selfcheck, py::arg("seed") = 1ULL,
        "Run the built-in diagnostic suite; returns {'failures': int, 'log': str}.");

  m.attr("__version__") = "1.0.0";
}
