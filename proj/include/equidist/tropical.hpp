#pragma once

// The tropical distance series of a convex domain Omega with lattice L:
//
//   F(p) = min over nonzero lambda in L of  c_lambda + lambda . p,
//   c_lambda = sup_{q in Omega} (-lambda) . q
//
// evaluated exactly (up to floating point) by certified finite enumeration.
// The load-bearing bound: for p at distance d from the boundary and any
// lambda with finite coefficient, c_lambda + lambda.p >= |lambda| d, because
// the ball B(p, d) sits inside the closure of Omega. Hence once a candidate
// of value V is known, only lattice vectors of norm <= V/d can beat it, and
// enumerating that ball realizes the infimum as a minimum.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "equidist/convex_domain.hpp"
#include "equidist/errors.hpp"
#include "equidist/geometry.hpp"
#include "equidist/lattice.hpp"

namespace equidist {

struct TropicalValue {
  double value = 0.0;
  LatticeVector argmin{};
  double certified_radius = 0.0;
};

struct EvalOptions {
  int max_doublings = 20;  // cap on the empty-cone candidate search
};

// Per-point data shared across lattices (the expensive pieces do not depend
// on the lattice).
struct EvalContext {
  const ConvexDomain* domain = nullptr;
  Vec2 p{};
  double boundary_dist = 0.0;
  ConeDesc cone{};  // directions with finite coefficient
  EvalOptions opts{};
};

inline EvalContext make_eval_context(const ConvexDomain& domain, Vec2 p, EvalOptions opts = {}) {
  if (domain.contains(p) == Containment::Exterior)
    throw PointOutside("evaluation point lies outside the domain");
  EvalContext ctx;
  ctx.domain = &domain;
  ctx.p = p;
  ctx.boundary_dist = std::max(0.0, domain.boundary_distance(p));
  ctx.cone = domain.finite_coefficient_cone();
  ctx.opts = opts;
  return ctx;
}

namespace detail {

struct BestCandidate {
  double value = kInf;
  std::int64_t m = 0, n = 0;
  Vec2 ambient{};
  bool found = false;

  void offer(double v, std::int64_t m_in, std::int64_t n_in, Vec2 amb) {
    if (!found || v < value) {
      value = v;
      m = m_in;
      n = n_in;
      ambient = amb;
      found = true;
      return;
    }
    if (v == value) {
      std::int64_t am = m_in, an = n_in, bm = m, bn = n;
      sign_normalize(am, an);
      sign_normalize(bm, bn);
      if (coeff_tie_less(am, an, bm, bn) ||
          (am == bm && an == bn && m_in == am && n_in == an && (m != bm || n != bn))) {
        // prefer the lexicographically least normalized pair; among a tied
        // +-lambda pair prefer the positive representative
        m = m_in;
        n = n_in;
        ambient = amb;
      }
    }
  }
};

// One enumeration pass over the ball of the given radius, cone-filtered.
// Rows are coefficient lines of the reduced basis; each row's admissible
// j-interval is cut down by the disk and the two cone half-planes before any
// candidate is touched, which keeps skewed (cusp) bases affordable.
inline void scan_ball(const EvalContext& ctx, const Lattice& lat, double radius,
                      BestCandidate& best) {
  const ConvexDomain& domain = *ctx.domain;
  const bool full = ctx.cone.full_plane;
  Vec2 e1 = ctx.cone.ray1, e2 = ctx.cone.ray2;
  if (!full && cross(e1, e2) < 0.0) std::swap(e1, e2);
  const Vec2 p = ctx.p;

  const Vec2 r1 = lat.reduced_b1();
  const Vec2 r2 = lat.reduced_b2();
  const double det_abs = std::abs(cross(r1, r2));
  const double g11 = dot(r1, r1), g12 = dot(r1, r2), g22 = dot(r2, r2);
  const double rr = radius * radius * (1.0 + 1e-12);

  // rows run along r2 (the longer reduced vector), so the row count
  // radius*|r1|/det stays small even for extreme cusp bases
  double jmax_f = std::floor(radius * norm(r1) / det_abs + 1e-9);
  std::int64_t jmax = std::max<std::int64_t>(1, static_cast<std::int64_t>(jmax_f));
  double ispan = std::floor(radius * norm(r2) / det_abs + 1e-9) + 1.0;
  if ((2.0 * static_cast<double>(jmax) + 1.0) * (2.0 * ispan + 1.0) > Lattice::kMaxEnumPoints)
    throw RegionTooLarge("enumeration region exceeds 1e8 candidates");

  // cone half-planes as linear forms in (i, j), with a slack wide enough to
  // keep every |lambda| <= radius boundary case
  const double a1 = cross(e1, r1), b1 = cross(e1, r2);
  const double a2 = cross(r1, e2), b2 = cross(r2, e2);
  const double slack = 1e-12 * radius;

  for (std::int64_t j = -jmax; j <= jmax; ++j) {
    const double dj = static_cast<double>(j);
    double disc = dj * dj * (g12 * g12 - g11 * g22) + g11 * rr;
    if (disc < 0.0) continue;
    double root = std::sqrt(disc);
    std::int64_t ilo = static_cast<std::int64_t>(std::ceil((-dj * g12 - root) / g11 - 1e-9));
    std::int64_t ihi = static_cast<std::int64_t>(std::floor((-dj * g12 + root) / g11 + 1e-9));
    if (!full) {
      // i*a1 + j*b1 >= -slack and i*a2 + j*b2 >= -slack
      if (a1 > 0.0) {
        ilo = std::max(ilo, static_cast<std::int64_t>(std::ceil((-slack - dj * b1) / a1 - 1e-9)));
      } else if (a1 < 0.0) {
        ihi = std::min(ihi, static_cast<std::int64_t>(std::floor((-slack - dj * b1) / a1 + 1e-9)));
      } else if (dj * b1 < -slack) {
        continue;
      }
      if (a2 > 0.0) {
        ilo = std::max(ilo, static_cast<std::int64_t>(std::ceil((-slack - dj * b2) / a2 - 1e-9)));
      } else if (a2 < 0.0) {
        ihi = std::min(ihi, static_cast<std::int64_t>(std::floor((-slack - dj * b2) / a2 + 1e-9)));
      } else if (dj * b2 < -slack) {
        continue;
      }
    }
    for (std::int64_t i = ilo; i <= ihi; ++i) {
      if (i == 0 && j == 0) continue;
      const double di = static_cast<double>(i);
      double n2v = di * di * g11 + 2.0 * di * dj * g12 + dj * dj * g22;
      if (n2v > rr) continue;
      Vec2 v{di * r1.x + dj * r2.x, di * r1.y + dj * r2.y};
      double c = domain.tropical_coefficient(v);
      if (!std::isfinite(c)) continue;
      std::int64_t m, n;
      lat.original_coeffs(i, j, m, n);
      best.offer(c + dot(v, p), m, n, v);
    }
  }
}

// Complete sweep of the sublevel set {lambda : c_lambda + lambda.p <= V},
// with V shrinking as better candidates appear. Rows run along the longer
// reduced vector; per-row index intervals come from the exact sublevel
// constraints (linear per polygon vertex, one quadratic for ellipses), the
// |lambda| <= V/d ball, and the finite-coefficient cone. Every lattice vector
// whose value could undercut the current best is visited, so the final
// minimum is certified.
inline void sublevel_scan(const EvalContext& ctx, const Lattice& lat,
                          detail::BestCandidate& best) {
  const ConvexDomain& domain = *ctx.domain;
  const double d = ctx.boundary_dist;
  const Vec2 p = ctx.p;
  const bool full = ctx.cone.full_plane;
  Vec2 e1 = ctx.cone.ray1, e2 = ctx.cone.ray2;
  if (!full && cross(e1, e2) < 0.0) std::swap(e1, e2);

  const Vec2 r1 = lat.reduced_b1();
  const Vec2 r2 = lat.reduced_b2();
  const double det_abs = std::abs(cross(r1, r2));
  const double g11 = dot(r1, r1), g12 = dot(r1, r2), g22 = dot(r2, r2);
  const double a1 = cross(e1, r1), b1 = cross(e1, r2);
  const double a2 = cross(r1, e2), b2 = cross(r2, e2);

  // per-vertex slopes of value(lambda) = max_v lambda.(p - v) for polygonal
  // domains; ellipse data otherwise
  const bool polygonal = domain.kind() != DomainKind::Ellipse;
  struct Slope {
    double su, sv;
  };
  std::vector<Slope> slopes;
  double h11 = 0, h12 = 0, h22 = 0, lu = 0, lv = 0;
  if (polygonal) {
    slopes.reserve(domain.vertices().size());
    for (Vec2 v : domain.vertices()) slopes.push_back({dot(r1, p - v), dot(r2, p - v)});
  } else {
    double det_m = domain.m11() * domain.m22() - domain.m12() * domain.m12();
    double q11 = domain.m22() / det_m, q12 = -domain.m12() / det_m, q22 = domain.m11() / det_m;
    // h = r^T M^-1 r in the lattice basis
    h11 = q11 * r1.x * r1.x + 2.0 * q12 * r1.x * r1.y + q22 * r1.y * r1.y;
    h12 = q11 * r1.x * r2.x + q12 * (r1.x * r2.y + r1.y * r2.x) + q22 * r1.y * r2.y;
    h22 = q11 * r2.x * r2.x + 2.0 * q12 * r2.x * r2.y + q22 * r2.y * r2.y;
    Vec2 pc = p - domain.ellipse_center();
    lu = dot(r1, pc);
    lv = dot(r2, pc);
  }

  const double row_height = det_abs / norm(r1);  // min |lambda| on row |j|
  double touched = 0.0;

  auto scan_row = [&](std::int64_t j) -> bool {
    // returns false once rows in this direction can no longer matter
    double vb = best.value * (1.0 + 1e-12) + 1e-300;
    double dj = static_cast<double>(j);
    if (std::abs(dj) * row_height * d > vb) return false;

    // ball |lambda| <= vb / d
    double rr = (vb / d) * (vb / d);
    double disc = dj * dj * (g12 * g12 - g11 * g22) + g11 * rr;
    if (disc < 0.0) return true;
    double root = std::sqrt(disc);
    double ilo_f = (-dj * g12 - root) / g11;
    double ihi_f = (-dj * g12 + root) / g11;

    if (polygonal) {
      for (const Slope& s : slopes) {
        double rhs = vb - s.sv * dj;
        if (s.su > 0.0) {
          ihi_f = std::min(ihi_f, rhs / s.su);
        } else if (s.su < 0.0) {
          ilo_f = std::max(ilo_f, rhs / s.su);
        } else if (rhs < 0.0) {
          return true;  // row entirely above the level
        }
      }
    } else {
      // sqrt(q(i)) <= vb - L(i), rhs >= 0; interior p makes the squared
      // inequality a positive quadratic in i
      double rhs0 = vb - lv * dj;
      if (lu > 0.0) {
        ihi_f = std::min(ihi_f, rhs0 / lu);
      } else if (lu < 0.0) {
        ilo_f = std::max(ilo_f, rhs0 / lu);
      } else if (rhs0 < 0.0) {
        return true;
      }
      double qa = h11 - lu * lu;
      double qb = h12 * dj + lu * rhs0;
      double qc = h22 * dj * dj - rhs0 * rhs0;
      if (qa > 0.0) {
        double qd = qb * qb - qa * qc;
        if (qd < 0.0) return true;
        double qroot = std::sqrt(qd);
        ilo_f = std::max(ilo_f, (-qb - qroot) / qa);
        ihi_f = std::min(ihi_f, (-qb + qroot) / qa);
      }
    }

    if (!full) {
      if (a1 > 0.0) {
        ilo_f = std::max(ilo_f, (-1e-12 * (vb / d) - dj * b1) / a1);
      } else if (a1 < 0.0) {
        ihi_f = std::min(ihi_f, (-1e-12 * (vb / d) - dj * b1) / a1);
      } else if (dj * b1 < -1e-12 * (vb / d)) {
        return true;
      }
      if (a2 > 0.0) {
        ilo_f = std::max(ilo_f, (-1e-12 * (vb / d) - dj * b2) / a2);
      } else if (a2 < 0.0) {
        ihi_f = std::min(ihi_f, (-1e-12 * (vb / d) - dj * b2) / a2);
      } else if (dj * b2 < -1e-12 * (vb / d)) {
        return true;
      }
    }

    std::int64_t ilo = static_cast<std::int64_t>(std::ceil(ilo_f - 1e-9));
    std::int64_t ihi = static_cast<std::int64_t>(std::floor(ihi_f + 1e-9));
    touched += static_cast<double>(ihi - ilo + 1);
    if (touched > Lattice::kMaxEnumPoints)
      throw RegionTooLarge("sublevel enumeration exceeds 1e8 candidates");
    for (std::int64_t i = ilo; i <= ihi; ++i) {
      if (i == 0 && j == 0) continue;
      double di = static_cast<double>(i);
      Vec2 v{di * r1.x + dj * r2.x, di * r1.y + dj * r2.y};
      double c = domain.tropical_coefficient(v);
      if (!std::isfinite(c)) continue;
      double val = c + dot(v, p);
      if (val <= best.value || !best.found) {
        std::int64_t m, n;
        lat.original_coeffs(i, j, m, n);
        best.offer(val, m, n, v);
      }
    }
    return true;
  };

  scan_row(0);
  bool up = true, down = true;
  for (std::int64_t k = 1; up || down; ++k) {
    if (up) up = scan_row(k);
    if (down) down = scan_row(-k);
    if (k > (1 << 30)) throw RegionTooLarge("sublevel row sweep runaway");
  }
}

}  // namespace detail

inline TropicalValue eval_tropical(const EvalContext& ctx, const Lattice& lat) {
  const double d = ctx.boundary_dist;
  double r0 = norm(lat.reduced_b1()) * (1.0 + 1e-12);

  if (d <= ConvexDomain::kBoundaryTol) {
    // Boundary point: the series vanishes there. Report the best supporting
    // direction found in a bounded search as the argmin.
    double r = 2.0 * norm(lat.reduced_b1());
    for (int k = 0; k <= ctx.opts.max_doublings; ++k) {
      detail::BestCandidate best;
      detail::scan_ball(ctx, lat, r, best);
      if (best.found) return {0.0, {best.m, best.n, best.ambient}, r};
      r *= 2.0;
    }
    throw NotAdmissible("no finite-coefficient lattice vector found near boundary point");
  }

  // seed: grow a ball until some finite-coefficient vector appears
  double cap = r0 * std::ldexp(1.0, ctx.opts.max_doublings);
  double radius = r0;
  detail::BestCandidate best;
  for (;;) {
    detail::scan_ball(ctx, lat, radius, best);
    if (best.found) break;
    radius *= 2.0;
    if (radius > cap) throw NotAdmissible("candidate search exhausted its radius cap");
  }

  // certified sweep of everything that could still undercut the seed
  detail::sublevel_scan(ctx, lat, best);
  double value = std::max(0.0, best.value);
  return {value, {best.m, best.n, best.ambient}, best.value * (1.0 + 1e-12) / d};
}

inline TropicalValue eval_tropical(const ConvexDomain& domain, const Lattice& lat, Vec2 p,
                                   EvalOptions opts = {}) {
  return eval_tropical(make_eval_context(domain, p, opts), lat);
}

struct EvalOutcome {
  std::optional<TropicalValue> value;
  std::string error;  // empty on success
};

inline std::vector<EvalOutcome> eval_tropical_batch(const ConvexDomain& domain, const Lattice& lat,
                                                    const std::vector<Vec2>& points,
                                                    EvalOptions opts = {}) {
  std::vector<EvalOutcome> out;
  out.reserve(points.size());
  for (Vec2 p : points) {
    try {
      out.push_back({eval_tropical(domain, lat, p, opts), {}});
    } catch (const Error& e) {
      out.push_back({std::nullopt, e.what()});
    }
  }
  return out;
}

}  // namespace equidist
