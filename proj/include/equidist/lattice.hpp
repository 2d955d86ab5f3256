#pragma once

// Planar lattices of co-area one: Lagrange-Gauss basis reduction, shortest
// vectors, and complete enumeration of lattice vectors in balls and cones.
// Enumeration ranges are certified through coefficient bounds on the reduced
// basis (Cramer's rule), so results are exact sets, not heuristics.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <vector>

#include "equidist/errors.hpp"
#include "equidist/geometry.hpp"

namespace equidist {

struct LatticeVector {
  std::int64_t m = 0;  // coefficients in the lattice's own basis
  std::int64_t n = 0;
  Vec2 ambient{};
};

// Sign normalization used for deterministic tie-breaking: pick the
// representative of {v, -v} with m > 0, or m == 0 and n > 0.
inline void sign_normalize(std::int64_t& m, std::int64_t& n) {
  if (m < 0 || (m == 0 && n < 0)) {
    m = -m;
    n = -n;
  }
}

// Deterministic order on sign-normalized coefficient pairs. Prefers small n,
// then small m: for the standard basis this selects (1,0) over (0,1).
inline bool coeff_tie_less(std::int64_t m1, std::int64_t n1, std::int64_t m2, std::int64_t n2) {
  if (n1 != n2) return n1 < n2;
  return m1 < m2;
}

class Lattice {
 public:
  static constexpr double kCoAreaTol = 1e-9;
  static constexpr double kDegenerateTol = 1e-12;
  static constexpr double kMaxEnumPoints = 1e8;

  Lattice(Vec2 b1, Vec2 b2) : Lattice(b1, b2, /*check_coarea=*/true) {}

  // Arbitrary-determinant lattices for internal/transform use; still rejects
  // numerically degenerate bases.
  static Lattice unchecked(Vec2 b1, Vec2 b2) { return Lattice(b1, b2, false); }

  Vec2 b1() const { return b1_; }
  Vec2 b2() const { return b2_; }
  double det() const { return det_; }

  Vec2 reduced_b1() const { return r1_; }
  Vec2 reduced_b2() const { return r2_; }

  // Reduced basis as a lattice in its own right (same integer span).
  Lattice reduce() const { return Lattice::unchecked(r1_, r2_); }

  // Integer transform: (m, n) = U . (i, j) maps reduced coefficients to
  // coefficients in the original basis. det U = +-1.
  void original_coeffs(std::int64_t i, std::int64_t j, std::int64_t& m, std::int64_t& n) const {
    m = u11_ * i + u12_ * j;
    n = u21_ * i + u22_ * j;
  }

  LatticeVector make_vector(std::int64_t m, std::int64_t n) const {
    return {m, n, b1_ * static_cast<double>(m) + b2_ * static_cast<double>(n)};
  }

  LatticeVector shortest_vector() const {
    // r1 is a shortest vector; scan the tiny ball at its norm for ties.
    double r = norm(r1_) * (1.0 + 1e-12);
    std::vector<LatticeVector> ball = enumerate_ball(r);
    if (ball.empty()) throw DegenerateBasis("no nonzero vector found");
    double best_n2 = norm2(ball.front().ambient);
    std::int64_t bm = 0, bn = 0;
    bool have = false;
    for (const LatticeVector& v : ball) {
      if (norm2(v.ambient) > best_n2 * (1.0 + 1e-14)) break;  // sorted by norm
      std::int64_t m = v.m, n = v.n;
      sign_normalize(m, n);
      if (!have || coeff_tie_less(m, n, bm, bn)) {
        bm = m;
        bn = n;
        have = true;
      }
    }
    return make_vector(bm, bn);
  }

  // All nonzero lattice vectors with |v| <= radius, both signs included,
  // sorted by (norm, m, n).
  std::vector<LatticeVector> enumerate_ball(double radius) const {
    std::vector<LatticeVector> out;
    for_ball(radius, [&](std::int64_t m, std::int64_t n, Vec2 v, double) {
      out.push_back({m, n, v});
    });
    std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) {
      double na = norm2(a.ambient), nb = norm2(b.ambient);
      if (na != nb) return na < nb;
      if (a.m != b.m) return a.m < b.m;
      return a.n < b.n;
    });
    return out;
  }

  // Subset of enumerate_ball lying in the closed cone spanned by e1, e2.
  std::vector<LatticeVector> enumerate_cone(Vec2 e1, Vec2 e2, double radius) const {
    std::vector<LatticeVector> all = enumerate_ball(radius);
    std::vector<LatticeVector> out;
    for (const LatticeVector& v : all)
      if (in_cone(v.ambient, e1, e2)) out.push_back(v);
    return out;
  }

  static bool in_cone(Vec2 v, Vec2 e1, Vec2 e2) {
    double s = cross(e1, e2);
    double tol = 1e-12 * norm(v);
    if (s < 0) std::swap(e1, e2);
    return cross(e1, v) >= -tol * norm(e1) && cross(v, e2) >= -tol * norm(e2);
  }

  // Inner loop used by the tropical evaluator: visit every nonzero lattice
  // vector of norm <= radius without materializing a list.
  template <class F>
  void for_ball(double radius, F&& f) const {
    if (!(radius > 0.0)) throw RegionTooLarge("enumeration radius must be positive");
    double imax_f = std::floor(radius * norm(r2_) / det_abs_ + 1e-9);
    double jmax_f = std::floor(radius * norm(r1_) / det_abs_ + 1e-9);
    std::int64_t imax = std::max<std::int64_t>(1, static_cast<std::int64_t>(imax_f));
    std::int64_t jmax = std::max<std::int64_t>(1, static_cast<std::int64_t>(jmax_f));
    double points = (2.0 * static_cast<double>(imax) + 1.0) * (2.0 * static_cast<double>(jmax) + 1.0);
    if (points > kMaxEnumPoints) throw RegionTooLarge("enumeration region exceeds 1e8 candidates");
    double rr = radius * radius * (1.0 + 1e-12);
    double g11 = dot(r1_, r1_), g12 = dot(r1_, r2_), g22 = dot(r2_, r2_);
    for (std::int64_t i = -imax; i <= imax; ++i) {
      for (std::int64_t j = -jmax; j <= jmax; ++j) {
        if (i == 0 && j == 0) continue;
        double di = static_cast<double>(i), dj = static_cast<double>(j);
        double n2v = di * di * g11 + 2.0 * di * dj * g12 + dj * dj * g22;
        if (n2v > rr) continue;
        std::int64_t m, n;
        original_coeffs(i, j, m, n);
        f(m, n, r1_ * di + r2_ * dj, n2v);
      }
    }
  }

 private:
  Vec2 b1_, b2_;
  Vec2 r1_, r2_;  // Lagrange-reduced basis of the same lattice
  std::int64_t u11_ = 1, u12_ = 0, u21_ = 0, u22_ = 1;  // [r1 r2] = [b1 b2] U
  double det_ = 1.0;
  double det_abs_ = 1.0;

  Lattice(Vec2 b1, Vec2 b2, bool check_coarea) : b1_(b1), b2_(b2) {
    det_ = cross(b1_, b2_);
    det_abs_ = std::abs(det_);
    if (det_abs_ < kDegenerateTol) throw DegenerateBasis("basis determinant below 1e-12");
    if (check_coarea && std::abs(det_abs_ - 1.0) > kCoAreaTol)
      throw DegenerateBasis("basis co-area differs from one beyond 1e-9");
    gauss_reduce();
  }

  void gauss_reduce() {
    r1_ = b1_;
    r2_ = b2_;
    u11_ = 1; u12_ = 0; u21_ = 0; u22_ = 1;
    for (int iter = 0; iter < 128; ++iter) {
      if (norm2(r2_) < norm2(r1_)) {
        std::swap(r1_, r2_);
        std::swap(u11_, u12_);
        std::swap(u21_, u22_);
      }
      double mu_f = std::nearbyint(dot(r1_, r2_) / norm2(r1_));
      if (mu_f == 0.0) break;
      if (std::abs(mu_f) > 9e15) throw DegenerateBasis("basis too skewed to reduce");
      auto mu = static_cast<std::int64_t>(mu_f);
      r2_ -= r1_ * mu_f;
      u12_ -= mu * u11_;
      u22_ -= mu * u21_;
    }
    if (norm2(r2_) < norm2(r1_)) {
      std::swap(r1_, r2_);
      std::swap(u11_, u12_);
      std::swap(u21_, u22_);
    }
  }
};

}  // namespace equidist
