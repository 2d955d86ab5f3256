#pragma once

// The space of unit-covolume planar lattices, SL2(Z)\SL2(R), parametrized by
// the modular fundamental domain {|x| <= 1/2, x^2 + y^2 >= 1} times a rotation
// angle theta in [0, pi). The invariant measure is normalized to total mass 1:
// density proportional to y^-2 dx dy dtheta. Provides an exact sampler, a
// deterministic tensor quadrature with geometric y-spacing, the cusp tail
// bound for truncated quadrature, and reduction of arbitrary bases back to
// fundamental-domain coordinates.

#include <cmath>
#include <cstdint>
#include <vector>

#include "equidist/errors.hpp"
#include "equidist/geometry.hpp"
#include "equidist/lattice.hpp"
#include "equidist/rng.hpp"

namespace equidist {

struct ModuliPoint {
  double x = 0.0;      // |x| <= 1/2
  double y = 1.0;      // y >= sqrt(1 - x^2)
  double theta = 0.0;  // [0, pi)
};

struct WeightedNode {
  ModuliPoint point;
  double weight = 0.0;
};

inline Lattice lattice_at(const ModuliPoint& mp) {
  double s = 1.0 / std::sqrt(mp.y);
  Mat2 rot = Mat2::rotation(mp.theta);
  Vec2 b1 = rot.apply({s, 0.0});
  Vec2 b2 = rot.apply({mp.x * s, mp.y * s});  // (x/sqrt(y), sqrt(y))
  return Lattice::unchecked(b1, b2);
}

// Exact draw from the normalized invariant measure:
//   x = sin t with t ~ U(-pi/6, pi/6)   (marginal density (3/pi)(1-x^2)^{-1/2})
//   y = sqrt(1-x^2)/u with u ~ U(0,1]   (conditional tail P(Y > y) = sqrt(1-x^2)/y)
//   theta ~ U[0, pi)
inline ModuliPoint moduli_point_from_uniforms(double u1, double u2, double u3) {
  double t = -M_PI / 6.0 + u1 * (M_PI / 3.0);
  double x = std::sin(t);
  double y = std::sqrt(1.0 - x * x) / u2;
  double theta = u3 * M_PI;
  return {x, y, theta};
}

class ModuliSampler {
 public:
  explicit ModuliSampler(std::uint64_t seed) : seed_(seed) {}

  ModuliPoint sample(std::uint64_t index) const {
    double u1 = uniform01(seed_, index, 0);
    double u2 = uniform01_pos(seed_, index, 1);
    double u3 = uniform01(seed_, index, 2);
    return moduli_point_from_uniforms(u1, u2, u3);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Fraction of the normalized measure beyond y_max.
inline double cusp_tail_fraction(double y_max) {
  return 3.0 / (M_PI * y_max);
}

// Bound on the cusp tail of the mean of F^h for a bounded domain with
// circumradius R about the evaluation point: on the cusp F <= R * y^{-1/2},
// so the tail mass is at most (3/pi) R^h y_max^{-h/2-1} / (h/2 + 1).
inline double tail_bound(double circumradius, double h, double y_max) {
  if (!std::isfinite(circumradius))
    throw UnboundedDomain("tail bound requires a finite circumradius");
  if (!(h > 0.0) || !(y_max > 1.0)) throw InvalidGrid("tail_bound needs h > 0 and y_max > 1");
  return (3.0 / M_PI) * std::pow(circumradius, h) * std::pow(y_max, -0.5 * h - 1.0) /
         (0.5 * h + 1.0);
}

// Midpoint tensor grid over {|x| <= 1/2, sqrt(1-x^2) <= y <= y_max, theta in
// [0, pi)} with geometrically spaced y-nodes per x-column. Weights carry the
// y^-2 cell mass and are rescaled to sum exactly to the retained measure
// fraction 1 - cusp_tail_fraction(y_max).
inline std::vector<WeightedNode> quadrature_grid(double y_max, int nx, int ny, int ntheta) {
  if (!(y_max > 1.0) || nx < 2 || ny < 2 || ntheta < 2)
    throw InvalidGrid("quadrature grid needs y_max > 1 and counts >= 2");
  std::vector<WeightedNode> nodes;
  nodes.reserve(static_cast<size_t>(nx) * ny * ntheta);
  double raw_total = 0.0;
  for (int i = 0; i < nx; ++i) {
    double x = -0.5 + (i + 0.5) / nx;
    double y_lo = std::sqrt(1.0 - x * x);
    double ratio = std::pow(y_max / y_lo, 1.0 / ny);
    for (int j = 0; j < ny; ++j) {
      double y_a = y_lo * std::pow(ratio, j);
      double y_b = y_a * ratio;
      double y_mid = y_a * std::sqrt(ratio);
      double cell_mass = (3.0 / M_PI) * (1.0 / nx) * (1.0 / y_a - 1.0 / y_b) / ntheta;
      for (int k = 0; k < ntheta; ++k) {
        double theta = (k + 0.5) * M_PI / ntheta;
        nodes.push_back({{x, y_mid, theta}, cell_mass});
        raw_total += cell_mass;
      }
    }
  }
  double retained = 1.0 - cusp_tail_fraction(y_max);
  double rescale = retained / raw_total;
  for (WeightedNode& n : nodes) n.weight *= rescale;
  return nodes;
}

// Fundamental-domain coordinates of the lattice spanned by an arbitrary basis
// with |det| = 1 (up to 1e-9). lattice_at of the result spans the same set.
inline ModuliPoint reduce_to_fundamental(const Lattice& lat) {
  Vec2 r1 = lat.reduced_b1();
  Vec2 r2 = lat.reduced_b2();
  if (std::abs(std::abs(cross(r1, r2)) - 1.0) > Lattice::kCoAreaTol)
    throw DegenerateBasis("reduce_to_fundamental requires co-area one");
  double theta = std::atan2(r1.y, r1.x);
  if (theta < 0.0) theta += M_PI;
  if (theta >= M_PI) theta -= M_PI;
  double y = 1.0 / norm2(r1);
  Mat2 back = Mat2::rotation(-theta);
  Vec2 r2p = back.apply(r2);
  if (r2p.y < 0.0) r2p = -r2p;
  double x = r2p.x * std::sqrt(y);
  // integer shear cleanup; Gauss reduction already put |x| <= 1/2 up to ties
  double shift = std::nearbyint(x);
  if (shift != 0.0) x -= shift;
  return {x, y, theta};
}

inline ModuliPoint reduce_to_fundamental(Vec2 b1, Vec2 b2) {
  if (std::abs(std::abs(cross(b1, b2)) - 1.0) > Lattice::kCoAreaTol)
    throw DegenerateBasis("reduce_to_fundamental requires co-area one");
  return reduce_to_fundamental(Lattice::unchecked(b1, b2));
}

}  // namespace equidist
