#include "oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Poly::Poly(int degree) : degree_(degree), c_((degree + 1) * (degree + 1), 0.0) {
  if (degree < 0 || degree > 40) throw std::invalid_argument("Poly: degree out of range");
}

double Poly::coeff(int a, int b) const {
  if (a < 0 || b < 0 || a > degree_ || b > degree_) return 0.0;
  return c_[a * (degree_ + 1) + b];
}

double &Poly::coeff(int a, int b) { return c_[a * (degree_ + 1) + b]; }

Poly Poly::monomial(int a, int b, double coeff) {
  Poly p(a + b);
  p.coeff(a, b) = coeff;
  return p;
}

Poly Poly::affine(double c0, double gx, double gy) {
  Poly p(1);
  p.coeff(0, 0) = c0;
  p.coeff(1, 0) = gx;
  p.coeff(0, 1) = gy;
  return p;
}

Poly Poly::shifted_scaled_monomial(int a, int b, const Vec2 &center, double scale) {
  // ((x - cx)/s)^a = sum_i C(a,i) x^i (-cx)^(a-i) / s^a, likewise in y.
  Poly p(a + b);
  const double inv = 1.0 / scale;
  for (int i = 0; i <= a; ++i) {
    const double fx = binomial(a, i) * std::pow(-center.x(), a - i) * std::pow(inv, a);
    for (int j = 0; j <= b; ++j) {
      const double fy = binomial(b, j) * std::pow(-center.y(), b - j) * std::pow(inv, b);
      p.coeff(i, j) += fx * fy;
    }
  }
  return p;
}

Poly Poly::operator+(const Poly &other) const {
  Poly out(std::max(degree_, other.degree_));
  for (int a = 0; a <= out.degree_; ++a)
    for (int b = 0; b <= out.degree_; ++b) out.coeff(a, b) = coeff(a, b) + other.coeff(a, b);
  return out;
}

Poly Poly::operator-(const Poly &other) const { return *this + other * -1.0; }

Poly Poly::operator*(const Poly &other) const {
  Poly out(degree_ + other.degree_);
  for (int a = 0; a <= degree_; ++a)
    for (int b = 0; b <= degree_; ++b) {
      if (coeff(a, b) == 0.0) continue;
      for (int i = 0; i <= other.degree_; ++i)
        for (int j = 0; j <= other.degree_; ++j)
          out.coeff(a + i, b + j) += coeff(a, b) * other.coeff(i, j);
    }
  return out;
}

Poly Poly::operator*(double s) const {
  Poly out = *this;
  for (double &v : out.c_) v *= s;
  return out;
}

Poly Poly::dx() const {
  Poly out(std::max(degree_ - 1, 0));
  for (int a = 1; a <= degree_; ++a)
    for (int b = 0; b <= degree_ - 1; ++b) out.coeff(a - 1, b) = a * coeff(a, b);
  return out;
}

Poly Poly::dy() const {
  Poly out(std::max(degree_ - 1, 0));
  for (int a = 0; a <= degree_ - 1; ++a)
    for (int b = 1; b <= degree_; ++b) out.coeff(a, b - 1) = b * coeff(a, b);
  return out;
}

Poly Poly::pow(int n) const {
  Poly out = monomial(0, 0, 1.0);
  for (int i = 0; i < n; ++i) out = out * (*this);
  return out;
}

double Poly::eval(const Vec2 &p) const {
  // Horner in x with inner Horner in y.
  double rx = 0.0;
  for (int a = degree_; a >= 0; --a) {
    double ry = 0.0;
    for (int b = degree_; b >= 0; --b) ry = ry * p.y() + coeff(a, b);
    rx = rx * p.x() + ry;
  }
  return rx;
}

namespace {

// Exact integral of x^a y^b over the polygon by the divergence theorem with
// F = (x^(a+1) y^b / (a+1), 0): the edge a->b contributes
// (by - ay) * Integral_0^1 x(t)^(a+1) y(t)^b dt, and the t-integral expands
// binomially into sums of 1/(m+1).
double monomial_area_integral(int a, int b, std::span<const Vec2> loop) {
  const int n = static_cast<int>(loop.size());
  double total = 0.0;
  for (int e = 0; e < n; ++e) {
    const Vec2 &p = loop[e];
    const Vec2 &q = loop[(e + 1) % n];
    const double dx = q.x() - p.x(), dy = q.y() - p.y();
    if (dy == 0.0) continue;
    double sum = 0.0;
    for (int i = 0; i <= a + 1; ++i) {
      const double fx = binomial(a + 1, i) * std::pow(p.x(), a + 1 - i) * std::pow(dx, i);
      if (fx == 0.0) continue;
      for (int j = 0; j <= b; ++j) {
        const double fy = binomial(b, j) * std::pow(p.y(), b - j) * std::pow(dy, j);
        sum += fx * fy / (i + j + 1.0);
      }
    }
    total += dy * sum;
  }
  return total / (a + 1.0);
}

}  // namespace

double integrate(const Poly &p, std::span<const Vec2> loop) {
  double total = 0.0;
  for (int a = 0; a <= p.degree(); ++a)
    for (int b = 0; b <= p.degree(); ++b)
      if (p.coeff(a, b) != 0.0) total += p.coeff(a, b) * monomial_area_integral(a, b, loop);
  return total;
}

double integrate_segment(const Poly &p, const Vec2 &a, const Vec2 &b) {
  const double length = (b - a).norm();
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  double total = 0.0;
  for (int i = 0; i <= p.degree(); ++i) {
    for (int j = 0; j <= p.degree(); ++j) {
      const double c = p.coeff(i, j);
      if (c == 0.0) continue;
      // x(t)^i y(t)^j expanded in powers of t, integrated over [0,1].
      for (int u = 0; u <= i; ++u) {
        const double fx = binomial(i, u) * std::pow(a.x(), i - u) * std::pow(dx, u);
        if (fx == 0.0) continue;
        for (int v = 0; v <= j; ++v) {
          const double fy = binomial(j, v) * std::pow(a.y(), j - v) * std::pow(dy, v);
          total += c * fx * fy / (u + v + 1.0);
        }
      }
    }
  }
  return total * length;
}

namespace {

// Radon's 7-point rule, exact for total degree 5; barycentric points and
// weights normalized to sum to one.
struct RadonRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> weight;
};

RadonRule radon7() {
  RadonRule r;
  const double s15 = std::sqrt(15.0);
  const double b1 = (6.0 - s15) / 21.0, a1 = 1.0 - 2.0 * b1;
  const double b2 = (6.0 + s15) / 21.0, a2 = 1.0 - 2.0 * b2;
  const double w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
  r.bary[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  r.weight[0] = 9.0 / 40.0;
  r.bary[1] = {a1, b1, b1};
  r.bary[2] = {b1, a1, b1};
  r.bary[3] = {b1, b1, a1};
  r.weight[1] = r.weight[2] = r.weight[3] = w1;
  r.bary[4] = {a2, b2, b2};
  r.bary[5] = {b2, a2, b2};
  r.bary[6] = {b2, b2, a2};
  r.weight[4] = r.weight[5] = r.weight[6] = w2;
  return r;
}

double radon_triangle(const std::function<double(const Vec2 &)> &f, const Vec2 &a, const Vec2 &b,
                      const Vec2 &c, const RadonRule &rule) {
  const double signed_area = 0.5 * wgb::cross2(b - a, c - a);
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) {
    const Vec2 p = rule.bary[i][0] * a + rule.bary[i][1] * b + rule.bary[i][2] * c;
    sum += rule.weight[i] * f(p);
  }
  return sum * signed_area;
}

void subdivide(const std::function<double(const Vec2 &)> &f, const Vec2 &a, const Vec2 &b,
               const Vec2 &c, int depth, const RadonRule &rule, double &total) {
  if (depth == 0) {
    total += radon_triangle(f, a, b, c, rule);
    return;
  }
  const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  subdivide(f, a, ab, ca, depth - 1, rule, total);
  subdivide(f, ab, b, bc, depth - 1, rule, total);
  subdivide(f, ca, bc, c, depth - 1, rule, total);
  subdivide(f, ab, bc, ca, depth - 1, rule, total);
}

}  // namespace

double integrate_subdiv(const std::function<double(const Vec2 &)> &f, std::span<const Vec2> loop,
                        int subdiv) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) throw std::invalid_argument("integrate_subdiv: fewer than three vertices");
  Vec2 center = Vec2::Zero();
  for (const Vec2 &p : loop) center += p;
  center /= n;
  const RadonRule rule = radon7();
  double total = 0.0;
  // Fan triangles are signed, so any center works even for non-convex loops.
  for (int e = 0; e < n; ++e)
    subdivide(f, center, loop[e], loop[(e + 1) % n], subdiv, rule, total);
  return total;
}

}  // namespace oracle
