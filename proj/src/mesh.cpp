#include "wgb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wgb {

Mesh2D::Mesh2D(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells, int level)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), level_(level) {
  const int nv = n_vertices();
  for (const auto &loop : cells_) {
    if (loop.size() < 3) throw std::invalid_argument("Mesh2D: cell with fewer than 3 vertices");
    for (int v : loop)
      if (v < 0 || v >= nv) throw std::invalid_argument("Mesh2D: vertex index out of range");
  }

  // Derive the edge table from cell loops; canonical orientation is from the
  // smaller to the larger vertex index so that edge data is single-valued.
  std::map<std::pair<int, int>, int> edge_of;
  cell_edges_.resize(cells_.size());
  for (int c = 0; c < n_cells(); ++c) {
    const auto &loop = cells_[c];
    const int m = static_cast<int>(loop.size());
    for (int i = 0; i < m; ++i) {
      const int a = loop[i], b = loop[(i + 1) % m];
      if (a == b) throw std::invalid_argument("Mesh2D: repeated consecutive vertex in cell");
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_of.try_emplace(key, n_edges());
      if (inserted) {
        MeshEdge e;
        e.v0 = key.first;
        e.v1 = key.second;
        edges_.push_back(e);
      }
      MeshEdge &e = edges_[it->second];
      const int dir = (a == key.first) ? +1 : -1;
      if (dir > 0) {
        if (e.cell_left >= 0)
          throw std::invalid_argument("Mesh2D: edge traversed twice in the same direction");
        e.cell_left = c;
      } else {
        if (e.cell_right >= 0)
          throw std::invalid_argument("Mesh2D: edge traversed twice in the same direction");
        e.cell_right = c;
      }
      cell_edges_[c].push_back({it->second, dir});
    }
  }
  for (int e = 0; e < n_edges(); ++e)
    if (edges_[e].on_boundary()) boundary_edges_.push_back(e);

  areas_.resize(n_cells());
  diameters_.resize(n_cells());
  centroids_.resize(n_cells());
  for (int c = 0; c < n_cells(); ++c) {
    const auto loop = cell_loop(c);
    areas_[c] = polygon_signed_area(loop);
    diameters_[c] = polygon_diameter(loop);
    centroids_[c] = polygon_centroid(loop);
  }
  edge_lengths_.resize(n_edges());
  for (int e = 0; e < n_edges(); ++e)
    edge_lengths_[e] = (vertices_[edges_[e].v1] - vertices_[edges_[e].v0]).norm();
}

Vec2 Mesh2D::outward_normal(int e, int c) const {
  const MeshEdge &ed = edges_[e];
  Vec2 t = (vertices_[ed.v1] - vertices_[ed.v0]).normalized();
  if (ed.cell_left == c) return {t.y(), -t.x()};   // CCW cell: outward is tangent rotated -90
  if (ed.cell_right == c) return {-t.y(), t.x()};
  throw std::invalid_argument("outward_normal: edge not incident to cell");
}

std::vector<Vec2> Mesh2D::cell_loop(int c) const {
  std::vector<Vec2> loop;
  loop.reserve(cells_[c].size());
  for (int v : cells_[c]) loop.push_back(vertices_[v]);
  return loop;
}

void Mesh2D::write_text(std::ostream &out) const {
  out << "wgmesh 2d\n";
  out << "level " << level_ << "\n";
  out << "vertices " << n_vertices() << "\n";
  char buf[64];
  for (const Vec2 &p : vertices_) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  out << "cells " << n_cells() << "\n";
  for (const auto &loop : cells_) {
    out << loop.size();
    for (int v : loop) out << ' ' << v;
    out << "\n";
  }
}

Mesh2D Mesh2D::read_text(std::istream &in) {
  auto fail = [](const std::string &what) -> std::runtime_error {
    return std::runtime_error("mesh read: " + what);
  };
  std::string tag, dim;
  if (!(in >> tag >> dim) || tag != "wgmesh" || dim != "2d") throw fail("bad header");
  int level = 0, nv = 0, nc = 0;
  if (!(in >> tag >> level) || tag != "level") throw fail("missing level");
  if (!(in >> tag >> nv) || tag != "vertices" || nv < 0) throw fail("missing vertex count");
  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x() >> vertices[i].y())) throw fail("truncated vertex list");
  if (!(in >> tag >> nc) || tag != "cells" || nc < 0) throw fail("missing cell count");
  std::vector<std::vector<int>> cells(nc);
  for (int c = 0; c < nc; ++c) {
    int m = 0;
    if (!(in >> m) || m < 3) throw fail("bad cell size");
    cells[c].resize(m);
    for (int i = 0; i < m; ++i)
      if (!(in >> cells[c][i])) throw fail("truncated cell list");
  }
  return Mesh2D(std::move(vertices), std::move(cells), level);
}

namespace {

int cells_per_side(int level) {
  if (level < 0 || level > 14) throw std::invalid_argument("mesh level out of range [0,14]");
  return 1 << level;
}

}  // namespace

Mesh2D build_uniform_triangle_mesh(int level) {
  const int n = cells_per_side(level);
  const double s = 1.0 / n;
  std::vector<Vec2> vertices((n + 1) * (n + 1));
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices[vid(i, j)] = {i * s, j * s};

  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // Diagonal from the lower-left to the upper-right corner of the square.
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return Mesh2D(std::move(vertices), std::move(cells), level);
}

Mesh2D build_nonconvex_polygon_mesh(int level) {
  const int n = cells_per_side(level);
  // All vertices live on a lattice with spacing s/4 in x and s/2 in y, where
  // s = 1/n is the square size; keys are lattice coordinates.
  std::map<std::pair<int, int>, int> vid;
  std::vector<Vec2> vertices;
  auto vertex = [&](int a, int b) {
    auto [it, inserted] = vid.try_emplace({a, b}, static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back({a / (4.0 * n), b / (2.0 * n)});
    return it->second;
  };

  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int x0 = 4 * i, y0 = 2 * j;
      const int c00 = vertex(x0, y0), c10 = vertex(x0 + 4, y0);
      const int c01 = vertex(x0, y0 + 2), c11 = vertex(x0 + 4, y0 + 2);
      const int bot = vertex(x0 + 2, y0), top = vertex(x0 + 2, y0 + 2);
      const int p1 = vertex(x0 + 3, y0 + 1), p2 = vertex(x0 + 1, y0 + 1);
      // S-shaped cut bot -> p1 -> p2 -> top makes two interlocking hexagons,
      // each with one reflex corner.
      cells.push_back({c00, bot, p1, p2, top, c01});
      cells.push_back({bot, c10, c11, top, p2, p1});
    }
  }
  return Mesh2D(std::move(vertices), std::move(cells), level);
}

Mesh2D build_mesh(MeshFamilyKind family, int level) {
  switch (family) {
    case MeshFamilyKind::UniformTriangle: return build_uniform_triangle_mesh(level);
    case MeshFamilyKind::NonconvexPolygon: return build_nonconvex_polygon_mesh(level);
  }
  throw std::invalid_argument("build_mesh: unknown family");
}

MeshFamilyKind parse_family(const std::string &name) {
  if (name == "tri") return MeshFamilyKind::UniformTriangle;
  if (name == "poly") return MeshFamilyKind::NonconvexPolygon;
  throw std::invalid_argument("unknown mesh family '" + name + "' (expected tri or poly)");
}

std::string family_name(MeshFamilyKind family) {
  return family == MeshFamilyKind::UniformTriangle ? "tri" : "poly";
}

std::vector<std::string> validate_mesh(const Mesh2D &mesh) {
  std::vector<std::string> issues;
  auto report = [&issues](const std::string &msg) { issues.push_back(msg); };
  auto cell_msg = [](int c, const char *what) {
    std::ostringstream os;
    os << "cell " << c << ": " << what;
    return os.str();
  };

  double total_area = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto loop = mesh.cell_loop(c);
    if (!polygon_is_simple(loop)) report(cell_msg(c, "not a simple polygon"));
    const double area = polygon_signed_area(loop);
    if (area <= 0.0) report(cell_msg(c, "not counter-clockwise (signed area <= 0)"));
    total_area += area;
  }
  if (std::abs(total_area - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "cell areas sum to " << total_area << ", expected 1";
    report(os.str());
  }

  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_length(e) < 1e-14) {
      std::ostringstream os;
      os << "edge " << e << ": degenerate (length " << mesh.edge_length(e) << ")";
      report(os.str());
    }
  }

  // Recount edge traversals independently of the constructor's bookkeeping.
  std::map<std::pair<int, int>, int> traversals, orientation_sum;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto loop = mesh.cell(c);
    const int m = static_cast<int>(loop.size());
    for (int i = 0; i < m; ++i) {
      const int a = loop[i], b = loop[(i + 1) % m];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      traversals[key] += 1;
      orientation_sum[key] += (a < b) ? +1 : -1;
    }
  }
  for (const auto &[key, count] : traversals) {
    std::ostringstream os;
    os << "edge (" << key.first << "," << key.second << ")";
    if (count > 2) {
      os << ": shared by " << count << " cells";
      report(os.str());
    } else if (count == 2 && orientation_sum[key] != 0) {
      os << ": interior edge traversed twice in the same orientation";
      report(os.str());
    }
  }

  // Boundary edges must lie on the boundary of the unit square.
  for (int e : mesh.boundary_edges()) {
    const Vec2 &a = mesh.vertex(mesh.edge(e).v0);
    const Vec2 &b = mesh.vertex(mesh.edge(e).v1);
    auto on_side = [](double u, double v) {
      return (std::abs(u) < 1e-12 && std::abs(v) < 1e-12) ||
             (std::abs(u - 1.0) < 1e-12 && std::abs(v - 1.0) < 1e-12);
    };
    if (!(on_side(a.x(), b.x()) || on_side(a.y(), b.y()))) {
      std::ostringstream os;
      os << "edge " << e << ": marked boundary but not on the unit-square boundary";
      report(os.str());
    }
  }

  // Euler characteristic of a disk-like subdivision: V - E + C = 1.
  if (mesh.n_vertices() - mesh.n_edges() + mesh.n_cells() != 1)
    report("Euler characteristic V - E + C != 1");

  return issues;
}

MeshMetrics mesh_metrics(const Mesh2D &mesh) {
  MeshMetrics m;
  m.cell_count = mesh.n_cells();
  m.edge_count = mesh.n_edges();
  for (int c = 0; c < mesh.n_cells(); ++c) m.h = std::max(m.h, mesh.cell_diameter(c));
  m.min_edge = mesh.n_edges() > 0 ? mesh.edge_length(0) : 0.0;
  for (int e = 1; e < mesh.n_edges(); ++e) m.min_edge = std::min(m.min_edge, mesh.edge_length(e));
  return m;
}

}  // namespace wgb
