#include "wgb/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wgb {

double polygon_signed_area(std::span<const Vec2> loop) {
  const int n = static_cast<int>(loop.size());
  double twice = 0.0;
  for (int i = 0; i < n; ++i) twice += cross2(loop[i], loop[(i + 1) % n]);
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> loop) {
  const int n = static_cast<int>(loop.size());
  double twice = 0.0;
  Vec2 acc = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec2 &a = loop[i];
    const Vec2 &b = loop[(i + 1) % n];
    const double c = cross2(a, b);
    twice += c;
    acc += c * (a + b);
  }
  if (std::abs(twice) < 1e-300) throw std::runtime_error("polygon_centroid: degenerate polygon");
  return acc / (3.0 * twice);
}

double polygon_diameter(std::span<const Vec2> loop) {
  const int n = static_cast<int>(loop.size());
  double d2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d2 = std::max(d2, (loop[i] - loop[j]).squaredNorm());
  return std::sqrt(d2);
}

namespace {

// Proper or touching intersection test for closed segments [a,b] and [c,d].
bool segments_intersect(const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &d, double tol) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
    return true;
  auto on_segment = [tol](const Vec2 &p, const Vec2 &q, const Vec2 &r) {
    if (std::abs(cross2(q - p, r - p)) > tol) return false;
    return r.x() >= std::min(p.x(), q.x()) - tol && r.x() <= std::max(p.x(), q.x()) + tol &&
           r.y() >= std::min(p.y(), q.y()) - tol && r.y() <= std::max(p.y(), q.y()) + tol;
  };
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

}  // namespace

bool polygon_is_simple(std::span<const Vec2> loop, double tol) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i)
    if ((loop[(i + 1) % n] - loop[i]).norm() < tol) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share an endpoint by construction).
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(loop[i], loop[(i + 1) % n], loop[j], loop[(j + 1) % n], tol))
        return false;
    }
  }
  return true;
}

std::optional<Vec2> polygon_kernel_point(std::span<const Vec2> loop, double tol) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) return std::nullopt;

  Vec2 lo = loop[0], hi = loop[0];
  for (const Vec2 &p : loop) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<Vec2> region = {lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}};

  // Clip the (convex) region against the left half-plane of every edge.
  for (int i = 0; i < n && !region.empty(); ++i) {
    const Vec2 a = loop[i];
    const Vec2 dir = loop[(i + 1) % n] - a;
    std::vector<Vec2> next;
    const int m = static_cast<int>(region.size());
    for (int j = 0; j < m; ++j) {
      const Vec2 &p = region[j];
      const Vec2 &q = region[(j + 1) % m];
      const double sp = cross2(dir, p - a);
      const double sq = cross2(dir, q - a);
      if (sp >= -tol) next.push_back(p);
      if ((sp > tol && sq < -tol) || (sp < -tol && sq > tol))
        next.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    region = std::move(next);
  }
  if (region.size() < 3) return std::nullopt;
  const double area = std::abs(polygon_signed_area(region));
  if (area < tol) return std::nullopt;
  return polygon_centroid(region);
}

std::vector<std::array<int, 3>> triangulate_polygon(std::span<const Vec2> loop) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) throw std::runtime_error("triangulate_polygon: fewer than three vertices");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;

  auto inside_triangle = [](const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &p) {
    const double eps = -1e-14;
    return cross2(b - a, p - a) >= eps && cross2(c - b, p - b) >= eps &&
           cross2(a - c, p - c) >= eps;
  };

  std::vector<std::array<int, 3>> tris;
  int guard = 0;
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int i = 0; i < m; ++i) {
      const int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      const Vec2 &a = loop[ia], &b = loop[ib], &c = loop[ic];
      if (cross2(b - a, c - a) <= 1e-14) continue;  // reflex or collinear corner
      bool ear = true;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (inside_triangle(a, b, c, loop[j])) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 4 * n)
      throw std::runtime_error("triangulate_polygon: no ear found (polygon not simple?)");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

}  // namespace wgb
