#include "wgb/weakops.hpp"

#include <cmath>
#include <stdexcept>

namespace wgb {

namespace {

// Values of every basis gradient component at the rule points: out[d](q, i)
// = d(phi_i)/dx_d at point q.
std::array<Eigen::MatrixXd, 2> gradient_values(const CellBasis &basis, const QuadRule &rule) {
  const int nq = static_cast<int>(rule.weights.size());
  std::array<Eigen::MatrixXd, 2> out = {Eigen::MatrixXd(nq, basis.size()),
                                        Eigen::MatrixXd(nq, basis.size())};
  for (int q = 0; q < nq; ++q) {
    const Vec2 p = rule.points.row(q).transpose();
    const auto grad = basis.eval_grad(p);
    out[0].row(q) = grad.col(0).transpose();
    out[1].row(q) = grad.col(1).transpose();
  }
  return out;
}

}  // namespace

ElementOps build_element_ops(const Mesh2D &mesh, int cell, int k, int r) {
  if (k < 1) throw std::invalid_argument("build_element_ops: k must be >= 1");
  if (r < k - 1) throw std::invalid_argument("build_element_ops: lifting degree r below k-1");

  ElementOps ops;
  ops.layout.k = k;
  ops.layout.n_edges = static_cast<int>(mesh.cell_edges(cell).size());
  ops.r = r;
  ops.diameter = mesh.cell_diameter(cell);
  ops.area = mesh.cell_area(cell);

  const CellBasis basis_k = make_cell_basis(mesh, cell, k);
  const CellBasis basis_r = make_cell_basis(mesh, cell, r);
  const CellBasis basis_p = make_cell_basis(mesh, cell, k - 1);
  const int nk = basis_k.size(), nr = basis_r.size(), np = basis_p.size();
  const int total = ops.layout.total();
  const int q = operator_exactness(k, r);

  const QuadRule crule = cell_rule(mesh, cell, q);
  const Eigen::MatrixXd vk = basis_k.values(crule);
  const auto grad_r = gradient_values(basis_r, crule);
  const auto grad_p = gradient_values(basis_p, crule);
  const Eigen::VectorXd &w = crule.weights;

  ops.mass_k = mass_matrix(basis_k, crule);
  ops.mass_r = mass_matrix(basis_r, crule);
  ops.mass_p = mass_matrix(basis_p, crule);
  ops.pressure_moments = basis_p.values(crule).transpose() * w;

  // Right-hand sides of the lifting problems: integration by parts moves the
  // derivative onto the lifting basis in the interior and produces normal
  // fluxes of the traces on the boundary.
  Eigen::MatrixXd rhs_grad = Eigen::MatrixXd::Zero(4 * nr, total);
  Eigen::MatrixXd rhs_div = Eigen::MatrixXd::Zero(np, total);
  ops.stabilizer = Eigen::MatrixXd::Zero(total, total);

  for (int comp = 0; comp < 2; ++comp) {
    for (int deriv = 0; deriv < 2; ++deriv) {
      rhs_grad.block((2 * comp + deriv) * nr, ops.layout.interior(comp, 0), nr, nk) =
          -grad_r[deriv].transpose() * w.asDiagonal() * vk;
    }
    rhs_div.block(0, ops.layout.interior(comp, 0), np, nk) =
        -grad_p[comp].transpose() * w.asDiagonal() * vk;
  }

  const EdgeBasis edge_basis(k);
  const auto cell_edges = mesh.cell_edges(cell);
  for (int le = 0; le < static_cast<int>(cell_edges.size()); ++le) {
    const int e = cell_edges[le].edge;
    const EdgeQuadRule erule = edge_rule(mesh, e, q);
    const Vec2 normal = mesh.outward_normal(e, cell);
    const Eigen::MatrixXd vr_e = basis_r.values(erule);
    const Eigen::MatrixXd vp_e = basis_p.values(erule);
    const Eigen::MatrixXd vk_e = basis_k.values(erule);
    const Eigen::MatrixXd vb_e = edge_basis.values(erule);
    const auto &we = erule.weights;

    for (int comp = 0; comp < 2; ++comp) {
      const int col = ops.layout.edge_first(le, comp);
      for (int deriv = 0; deriv < 2; ++deriv) {
        rhs_grad.block((2 * comp + deriv) * nr, col, nr, k + 1) +=
            normal(deriv) * (vr_e.transpose() * we.asDiagonal() * vb_e);
      }
      rhs_div.block(0, col, np, k + 1) +=
          normal(comp) * (vp_e.transpose() * we.asDiagonal() * vb_e);

      // Stabilizer: h^{-1} <v0 - vb, v0 - vb> accumulated edge by edge.
      const Eigen::MatrixXd m00 = vk_e.transpose() * we.asDiagonal() * vk_e;
      const Eigen::MatrixXd m0b = vk_e.transpose() * we.asDiagonal() * vb_e;
      const Eigen::MatrixXd mbb = vb_e.transpose() * we.asDiagonal() * vb_e;
      const double scale = 1.0 / ops.diameter;
      const int ic = ops.layout.interior(comp, 0);
      ops.stabilizer.block(ic, ic, nk, nk) += scale * m00;
      ops.stabilizer.block(ic, col, nk, k + 1) -= scale * m0b;
      ops.stabilizer.block(col, ic, k + 1, nk) -= scale * m0b.transpose();
      ops.stabilizer.block(col, col, k + 1, k + 1) += scale * mbb;
    }
  }

  const auto solver_r = ops.mass_r.ldlt();
  ops.gradient.resize(4 * nr, total);
  for (int block = 0; block < 4; ++block)
    ops.gradient.middleRows(block * nr, nr) = solver_r.solve(rhs_grad.middleRows(block * nr, nr));
  ops.divergence = ops.mass_p.ldlt().solve(rhs_div);

  return ops;
}

namespace {

int default_exactness(int degree) { return 2 * degree + 2; }

Eigen::VectorXd project_with(const CellBasis &basis, const QuadRule &rule, const ScalarFn &f) {
  const int nq = static_cast<int>(rule.weights.size());
  Eigen::VectorXd samples(nq);
  for (int q = 0; q < nq; ++q) samples(q) = f(rule.points.row(q).transpose());
  const Eigen::MatrixXd values = basis.values(rule);
  const Eigen::MatrixXd mass = mass_matrix(basis, rule);
  return mass.ldlt().solve(values.transpose() * (rule.weights.asDiagonal() * samples));
}

}  // namespace

Eigen::VectorXd project_scalar(const ScalarFn &f, const Mesh2D &mesh, int cell, int degree,
                               int exactness) {
  if (exactness < 0) exactness = default_exactness(degree);
  const CellBasis basis = make_cell_basis(mesh, cell, degree);
  const QuadRule rule = cell_rule(mesh, cell, exactness);
  return project_with(basis, rule, f);
}

Eigen::VectorXd project_interior(const VectorFn &f, const Mesh2D &mesh, int cell, int degree,
                                 int exactness) {
  if (exactness < 0) exactness = default_exactness(degree);
  const CellBasis basis = make_cell_basis(mesh, cell, degree);
  const QuadRule rule = cell_rule(mesh, cell, exactness);
  Eigen::VectorXd out(2 * basis.size());
  for (int comp = 0; comp < 2; ++comp) {
    auto component = [&f, comp](const Vec2 &x) { return f(x)(comp); };
    out.segment(comp * basis.size(), basis.size()) = project_with(basis, rule, component);
  }
  return out;
}

Eigen::VectorXd project_edge(const VectorFn &f, const Mesh2D &mesh, int edge, int degree,
                             int exactness) {
  if (exactness < 0) exactness = default_exactness(degree);
  const MeshEdge &e = mesh.edge(edge);
  const EdgeQuadRule rule =
      map_to_segment(segment_rule(exactness), mesh.vertex(e.v0), mesh.vertex(e.v1));
  const EdgeBasis basis(degree);
  const Eigen::MatrixXd values = basis.values(rule);
  const Eigen::MatrixXd mass = mass_matrix(basis, rule);
  const int nq = static_cast<int>(rule.weights.size());
  Eigen::VectorXd out(2 * basis.size());
  for (int comp = 0; comp < 2; ++comp) {
    Eigen::VectorXd samples(nq);
    for (int q = 0; q < nq; ++q) samples(q) = f(rule.points.row(q).transpose())(comp);
    out.segment(comp * basis.size(), basis.size()) =
        mass.ldlt().solve(values.transpose() * (rule.weights.asDiagonal() * samples));
  }
  return out;
}

WGField zero_field(const Mesh2D &mesh, int k) {
  WGField field;
  field.k = k;
  field.interior.assign(mesh.n_cells(), Eigen::VectorXd::Zero(2 * poly_space_dim(k)));
  field.edge.assign(mesh.n_edges(), Eigen::VectorXd::Zero(2 * (k + 1)));
  return field;
}

WGField project_field(const VectorFn &f, const Mesh2D &mesh, int k, int exactness) {
  WGField field;
  field.k = k;
  field.interior.reserve(mesh.n_cells());
  field.edge.reserve(mesh.n_edges());
  for (int c = 0; c < mesh.n_cells(); ++c)
    field.interior.push_back(project_interior(f, mesh, c, k, exactness));
  for (int e = 0; e < mesh.n_edges(); ++e)
    field.edge.push_back(project_edge(f, mesh, e, k, exactness));
  return field;
}

WGField field_difference(const WGField &a, const WGField &b) {
  if (a.k != b.k || a.interior.size() != b.interior.size() || a.edge.size() != b.edge.size())
    throw std::invalid_argument("field_difference: incompatible fields");
  WGField out;
  out.k = a.k;
  out.interior.reserve(a.interior.size());
  out.edge.reserve(a.edge.size());
  for (size_t c = 0; c < a.interior.size(); ++c) out.interior.push_back(a.interior[c] - b.interior[c]);
  for (size_t e = 0; e < a.edge.size(); ++e) out.edge.push_back(a.edge[e] - b.edge[e]);
  return out;
}

Eigen::VectorXd gather_local(const WGField &field, const Mesh2D &mesh, int cell) {
  LocalDofLayout layout{field.k, static_cast<int>(mesh.cell_edges(cell).size())};
  Eigen::VectorXd local(layout.total());
  local.head(layout.n_interior()) = field.interior[cell];
  const auto cell_edges = mesh.cell_edges(cell);
  for (int le = 0; le < layout.n_edges; ++le)
    local.segment(layout.edge_first(le, 0), layout.per_edge()) = field.edge[cell_edges[le].edge];
  return local;
}

Vec2 eval_interior(const WGField &field, const Mesh2D &mesh, int cell, const Vec2 &x) {
  const CellBasis basis = make_cell_basis(mesh, cell, field.k);
  const Eigen::VectorXd values = basis.eval(x);
  const auto &coeffs = field.interior[cell];
  const int nk = basis.size();
  return {values.dot(coeffs.head(nk)), values.dot(coeffs.tail(nk))};
}

double commutativity_defect_cell(const VectorFn &u, const TensorFn &grad_u, const ScalarFn &div_u,
                                 const Mesh2D &mesh, int cell, int k, int exactness) {
  const int r = k - 1;
  const ElementOps ops = build_element_ops(mesh, cell, k, r);
  const int nr = poly_space_dim(r);

  // Local coefficients of the projected field.
  Eigen::VectorXd local(ops.layout.total());
  local.head(ops.layout.n_interior()) = project_interior(u, mesh, cell, k, exactness);
  const auto cell_edges = mesh.cell_edges(cell);
  for (int le = 0; le < ops.layout.n_edges; ++le)
    local.segment(ops.layout.edge_first(le, 0), ops.layout.per_edge()) =
        project_edge(u, mesh, cell_edges[le].edge, k, exactness);

  const Eigen::VectorXd lifted_grad = ops.gradient * local;
  const Eigen::VectorXd lifted_div = ops.divergence * local;

  double defect = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    for (int deriv = 0; deriv < 2; ++deriv) {
      auto entry = [&grad_u, comp, deriv](const Vec2 &x) { return grad_u(x)(comp, deriv); };
      const Eigen::VectorXd expected = project_scalar(entry, mesh, cell, r, exactness);
      defect = std::max(
          defect,
          (lifted_grad.segment((2 * comp + deriv) * nr, nr) - expected).cwiseAbs().maxCoeff());
    }
  }
  const Eigen::VectorXd expected_div = project_scalar(div_u, mesh, cell, r, exactness);
  defect = std::max(defect, (lifted_div - expected_div).cwiseAbs().maxCoeff());
  return defect;
}

}  // namespace wgb
