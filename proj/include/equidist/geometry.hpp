#pragma once

// Small 2-d vector/matrix kit plus the handful of scalar numerics
// (golden-section minimization, adaptive Simpson) used across the library.

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "equidist/errors.hpp"

namespace equidist {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  return n > 0.0 ? a / n : a;
}
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// 2x2 matrix, row-major entries.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
  }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  static Mat2 from_columns(Vec2 c1, Vec2 c2) { return {c1.x, c2.x, c1.y, c2.y}; }

  Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  Vec2 col1() const { return {a11, a21}; }
  Vec2 col2() const { return {a12, a22}; }
  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }

  Mat2 inverse() const {
    double d = det();
    if (std::abs(d) < 1e-300) throw SingularMatrix("2x2 matrix is singular");
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
};

// Eigen-decomposition of a symmetric 2x2 matrix [[a,b],[b,c]].
// Returns eigenvalues l1 <= l2 and the unit eigenvector of l1.
struct SymEigen2 {
  double l1, l2;
  Vec2 v1;
};

inline SymEigen2 sym_eigen(double a, double b, double c) {
  double tr = a + c;
  double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  double l1 = 0.5 * (tr - disc);
  double l2 = 0.5 * (tr + disc);
  Vec2 v;
  // Pick the more stable row of (M - l1 I).
  Vec2 r1{a - l1, b}, r2{b, c - l1};
  Vec2 r = norm2(r1) >= norm2(r2) ? r1 : r2;
  if (norm2(r) < 1e-280) {
    v = {1.0, 0.0};  // multiple of identity
  } else {
    v = normalized(rot90(r));
  }
  return {l1, l2, v};
}

// Golden-section minimization of a unimodal function on [a, b].
inline double minimize_golden(const std::function<double(double)>& f, double a, double b,
                              double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

namespace detail {

inline double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                          double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 50) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace equidist
