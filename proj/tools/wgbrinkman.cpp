// Command-line driver: convergence studies, single solves, and self checks.
#include "wgb/selfcheck.hpp"
#include "wgb/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

// Command-line usage problems detected after CLI11 parsing (exit code 2, like
// parser errors), as opposed to runtime failures (exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string family = "tri";
  int k = 1;
  std::string mode = "stab";
  int lifting = -1;  // -1: derive from k and mode
  double kappa = 1.0;
};

int resolve_lifting(const CommonOptions &opt) {
  const bool stabilized = opt.mode == "stab";
  const int r = opt.lifting >= 0 ? opt.lifting : wgb::default_lifting_degree(opt.k, stabilized);
  if (r < opt.k - 1) {
    std::ostringstream os;
    os << "lifting degree r=" << r << " is below k-1=" << opt.k - 1;
    throw UsageError(os.str());
  }
  return r;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void add_common_options(CLI::App *cmd, CommonOptions &opt) {
  cmd->add_option("--family", opt.family, "Mesh family")
      ->check(CLI::IsMember({"tri", "poly"}))
      ->capture_default_str();
  cmd->add_option("--k", opt.k, "Polynomial degree of the velocity space")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  cmd->add_option("--mode", opt.mode, "stab: stabilized, sf: stabilizer-free")
      ->check(CLI::IsMember({"stab", "sf"}))
      ->capture_default_str();
  cmd->add_option("--r", opt.lifting, "Gradient lifting degree (default: k-1 stab, k+3 sf)")
      ->check(CLI::Range(0, 12));
  cmd->add_option("--kappa", opt.kappa, "Constant isotropic permeability")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::pair<int, int> parse_levels(const std::string &spec) {
  int begin = 0, end = 0;
  const auto dots = spec.find("..");
  try {
    if (dots == std::string::npos) {
      begin = end = std::stoi(spec);
    } else {
      begin = std::stoi(spec.substr(0, dots));
      end = std::stoi(spec.substr(dots + 2));
    }
  } catch (const std::exception &) {
    throw UsageError("cannot parse --levels '" + spec + "' (expected A or A..B)");
  }
  if (begin < 0 || end < begin || end > 10)
    throw UsageError("level range '" + spec + "' out of bounds (0..10, ascending)");
  return {begin, end};
}

int cmd_convergence(const CommonOptions &opt, const std::string &levels_spec,
                    const std::string &format, const std::string &out_path) {
  const auto [begin, end] = parse_levels(levels_spec);
  const int r = resolve_lifting(opt);
  const wgb::ConvergenceReport report = wgb::run_convergence(
      wgb::parse_family(opt.family), opt.k, r, opt.mode == "stab", begin, end, opt.kappa);

  auto emit = [&](std::ostream &out) {
    if (format == "csv")
      wgb::write_csv(report, out);
    else
      wgb::write_table(report, out);
  };
  if (out_path.empty()) {
    emit(std::cout);
  } else {
    auto out = open_output(out_path);
    emit(out);
  }
  return 0;
}

int cmd_solve(const CommonOptions &opt, int level, bool zero_rhs, const std::string &out_path,
              const std::string &matrix_path, const std::string &mesh_path) {
  const int r = resolve_lifting(opt);
  const bool stabilized = opt.mode == "stab";
  const wgb::Mesh2D mesh = wgb::build_mesh(wgb::parse_family(opt.family), level);

  const wgb::BrinkmanCase exact = wgb::brinkman_benchmark(opt.kappa);
  wgb::BrinkmanProblem problem;
  problem.kappa_inv = wgb::uniform_kappa_inv(mesh, opt.kappa);
  problem.source_exactness = wgb::data_exactness(opt.k, r);
  if (zero_rhs)
    problem.source = [](const wgb::Vec2 &) -> wgb::Vec2 { return {0.0, 0.0}; };
  else
    problem.source = exact.source;

  const wgb::SaddleSystem system = wgb::assemble_system(mesh, opt.k, r, stabilized, problem);
  if (!mesh_path.empty()) {
    auto out = open_output(mesh_path);
    mesh.write_text(out);
  }
  if (!matrix_path.empty()) {
    auto out = open_output(matrix_path);
    wgb::write_coo(system.matrix, out);
  }
  const wgb::WGSolution solution = wgb::solve(system);

  std::ostringstream report;
  char buf[128];
  report << "family=" << opt.family << " level=" << level << " k=" << opt.k << " r=" << r
         << " mode=" << opt.mode;
  std::snprintf(buf, sizeof(buf), " kappa=%.12g\n", opt.kappa);
  report << buf;
  report << "cells=" << mesh.n_cells() << " edges=" << mesh.n_edges()
         << " velocity_dofs=" << system.dofmap.n_u << " pressure_dofs=" << system.dofmap.n_p
         << " total_dofs=" << system.dofmap.total() << "\n";
  std::snprintf(buf, sizeof(buf), "residual=%.12e\n", solution.residual);
  report << buf;
  std::snprintf(buf, sizeof(buf), "max_divergence=%.12e\n",
                wgb::max_discrete_divergence(solution, mesh));
  report << buf;
  if (zero_rhs) {
    std::snprintf(buf, sizeof(buf), "max_abs_unknown=%.12e\n",
                  solution.raw.size() > 0 ? solution.raw.cwiseAbs().maxCoeff() : 0.0);
    report << buf;
  } else {
    const wgb::ErrorTriple err = wgb::compute_errors(solution, exact, mesh, r);
    std::snprintf(buf, sizeof(buf), "e_l2u=%.12e\ne_energy=%.12e\ne_p=%.12e\n", err.velocity_l2,
                  err.energy, err.pressure_l2);
    report << buf;
  }

  if (out_path.empty()) {
    std::cout << report.str();
  } else {
    auto out = open_output(out_path);
    out << report.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Weak Galerkin finite element solver for the 2D Brinkman problem"};
  app.set_version_flag("--version", "wgbrinkman 1.0.0");
  app.set_config("--config", "", "Read option defaults from an INI file");
  app.require_subcommand(1);

  CommonOptions conv_opt;
  std::string levels_spec = "2..4";
  std::string format = "table";
  std::string conv_out;
  CLI::App *conv = app.add_subcommand("convergence", "Mesh-refinement convergence study");
  add_common_options(conv, conv_opt);
  conv->add_option("--levels", levels_spec, "Refinement levels A..B (or a single level)")
      ->capture_default_str();
  conv->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  conv->add_option("--out", conv_out, "Write the study to a file instead of stdout");

  CommonOptions solve_opt;
  int solve_level = 3;
  bool zero_rhs = false;
  std::string solve_out, matrix_path, mesh_path;
  CLI::App *solve = app.add_subcommand("solve", "Solve the benchmark problem on one mesh");
  add_common_options(solve, solve_opt);
  solve->add_option("--level", solve_level, "Refinement level")
      ->check(CLI::Range(0, 10))
      ->capture_default_str();
  solve->add_flag("--zero-rhs", zero_rhs, "Replace the source term by zero");
  solve->add_option("--out", solve_out, "Write the solve report to a file instead of stdout");
  solve->add_option("--dump-matrix", matrix_path, "Write the assembled matrix as 'row col value'");
  solve->add_option("--dump-mesh", mesh_path, "Write the mesh in wgmesh text format");

  std::uint64_t seed = 1;
  CLI::App *check = app.add_subcommand("check", "Run deterministic self checks");
  check->add_option("--seed", seed, "Seed for the randomized check groups")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (conv->parsed()) return cmd_convergence(conv_opt, levels_spec, format, conv_out);
    if (solve->parsed())
      return cmd_solve(solve_opt, solve_level, zero_rhs, solve_out, matrix_path, mesh_path);
    if (check->parsed()) {
      const int failures = wgb::run_selfcheck(std::cout, seed);
      if (failures > 0) {
        std::cerr << failures << " check group(s) failed\n";
        return 1;
      }
      return 0;
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
