#pragma once

// Level-curve extraction from scalar fields (marching squares with linear
// interpolation, saddle cells resolved by the cell average) and the basic
// contour operations: area/centroid, normalization to the class
// "curve up to translation and homothety", and Hausdorff distance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "equidist/errors.hpp"
#include "equidist/estimator.hpp"
#include "equidist/geometry.hpp"

namespace equidist {

struct Contour {
  std::vector<Vec2> points;
  bool closed = false;
  double level = 0.0;
};

namespace detail {

struct MsSegment {
  std::uint64_t from_key = 0, to_key = 0;
  Vec2 from{}, to{};
};

inline std::uint64_t edge_key(bool vertical, int ix, int iy) {
  return (static_cast<std::uint64_t>(vertical) << 62) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy)) << 31) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix));
}

}  // namespace detail

// Extract the level-t curves of the field. Cells touching NaN nodes are
// skipped, so chains end at the domain (or grid) boundary. Closed loops are
// oriented with the above-t region on their left.
inline std::vector<Contour> marching_squares(const ScalarField& field, double t) {
  using detail::MsSegment;
  std::vector<MsSegment> segs;
  const int nx = field.nx, ny = field.ny;

  auto interp = [&](double va, double vb, double a, double b) {
    double s = (t - va) / (vb - va);
    return a + s * (b - a);
  };

  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      double v00 = field.at(ix, iy), v10 = field.at(ix + 1, iy);
      double v11 = field.at(ix + 1, iy + 1), v01 = field.at(ix, iy + 1);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) || std::isnan(v01)) continue;
      int mask = (v00 > t ? 1 : 0) | (v10 > t ? 2 : 0) | (v11 > t ? 4 : 0) | (v01 > t ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      double x0 = field.x_at(ix), x1 = field.x_at(ix + 1);
      double y0 = field.y_at(iy), y1 = field.y_at(iy + 1);
      auto b_pt = [&] { return Vec2{interp(v00, v10, x0, x1), y0}; };
      auto t_pt = [&] { return Vec2{interp(v01, v11, x0, x1), y1}; };
      auto l_pt = [&] { return Vec2{x0, interp(v00, v01, y0, y1)}; };
      auto r_pt = [&] { return Vec2{x1, interp(v10, v11, y0, y1)}; };
      std::uint64_t kb = detail::edge_key(false, ix, iy);
      std::uint64_t kt = detail::edge_key(false, ix, iy + 1);
      std::uint64_t kl = detail::edge_key(true, ix, iy);
      std::uint64_t kr = detail::edge_key(true, ix + 1, iy);

      auto emit = [&](std::uint64_t ka, Vec2 pa, std::uint64_t kb2, Vec2 pb) {
        segs.push_back({ka, kb2, pa, pb});
      };

      switch (mask) {
        case 1: emit(kb, b_pt(), kl, l_pt()); break;           // BL above
        case 2: emit(kr, r_pt(), kb, b_pt()); break;           // BR above
        case 4: emit(kt, t_pt(), kr, r_pt()); break;           // TR above
        case 8: emit(kl, l_pt(), kt, t_pt()); break;           // TL above
        case 3: emit(kr, r_pt(), kl, l_pt()); break;           // bottom row above
        case 12: emit(kl, l_pt(), kr, r_pt()); break;          // top row above
        case 6: emit(kt, t_pt(), kb, b_pt()); break;           // right column above
        case 9: emit(kb, b_pt(), kt, t_pt()); break;           // left column above
        case 14: emit(kl, l_pt(), kb, b_pt()); break;          // all but BL
        case 13: emit(kb, b_pt(), kr, r_pt()); break;          // all but BR
        case 11: emit(kr, r_pt(), kt, t_pt()); break;          // all but TR
        case 7: emit(kt, t_pt(), kl, l_pt()); break;           // all but TL
        case 5: {                                               // BL + TR above
          double avg = 0.25 * (v00 + v10 + v11 + v01);
          if (avg > t) {
            emit(kb, b_pt(), kr, r_pt());
            emit(kt, t_pt(), kl, l_pt());
          } else {
            emit(kb, b_pt(), kl, l_pt());
            emit(kt, t_pt(), kr, r_pt());
          }
          break;
        }
        case 10: {                                              // BR + TL above
          double avg = 0.25 * (v00 + v10 + v11 + v01);
          if (avg > t) {
            emit(kl, l_pt(), kb, b_pt());
            emit(kr, r_pt(), kt, t_pt());
          } else {
            emit(kr, r_pt(), kb, b_pt());
            emit(kl, l_pt(), kt, t_pt());
          }
          break;
        }
        default: break;
      }
    }
  }

  // Stitch: with the above-on-left orientation each edge crossing has at most
  // one outgoing and one incoming segment.
  std::unordered_map<std::uint64_t, int> start_at;
  std::unordered_map<std::uint64_t, int> end_at;
  start_at.reserve(segs.size() * 2);
  end_at.reserve(segs.size() * 2);
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    start_at.emplace(segs[i].from_key, i);
    end_at.emplace(segs[i].to_key, i);
  }

  double dedupe_tol = 1e-12 * (std::abs(field.xmax - field.xmin) + std::abs(field.ymax - field.ymin));
  std::vector<bool> used(segs.size(), false);
  std::vector<Contour> out;
  for (int seed = 0; seed < static_cast<int>(segs.size()); ++seed) {
    if (used[seed]) continue;
    // walk backward to the chain start (or back around to the seed)
    int first = seed;
    bool closed = false;
    for (;;) {
      auto it = end_at.find(segs[first].from_key);
      if (it == end_at.end() || used[it->second]) break;
      if (it->second == seed) {
        closed = true;
        break;
      }
      first = it->second;
      if (first == seed) {
        closed = true;
        break;
      }
    }
    Contour c;
    c.level = t;
    c.closed = closed;
    c.points.push_back(segs[first].from);
    int cur = first;
    for (;;) {
      used[cur] = true;
      Vec2 pt = segs[cur].to;
      if (dist(c.points.back(), pt) > dedupe_tol) c.points.push_back(pt);
      auto it = start_at.find(segs[cur].to_key);
      if (it == start_at.end() || used[it->second]) break;
      cur = it->second;
    }
    if (closed && !c.points.empty() && dist(c.points.front(), c.points.back()) <= dedupe_tol)
      c.points.pop_back();
    if (c.points.size() >= (c.closed ? 3u : 2u)) out.push_back(std::move(c));
  }
  return out;
}

// Shoelace area (positive) and centroid of the enclosed region.
inline std::pair<double, Vec2> contour_area_centroid(const Contour& c) {
  if (!c.closed) throw OpenContour("area/centroid need a closed contour");
  double a2 = 0.0;
  double cx = 0.0, cy = 0.0;
  size_t k = c.points.size();
  for (size_t i = 0; i < k; ++i) {
    Vec2 p = c.points[i], q = c.points[(i + 1) % k];
    double w = cross(p, q);
    a2 += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  double area = 0.5 * a2;
  if (area == 0.0) throw OpenContour("contour encloses zero area");
  Vec2 centroid{cx / (6.0 * area), cy / (6.0 * area)};
  return {std::abs(area), centroid};
}

// Representative of the class of the curve up to translation and homothety:
// closed curves are centred at their centroid and scaled to unit area; open
// chains are centred at their chord midpoint and scaled to unit chord length.
inline Contour normalize_class(const Contour& c) {
  Contour out = c;
  if (c.closed) {
    auto [area, centroid] = contour_area_centroid(c);
    double s = 1.0 / std::sqrt(area);
    for (Vec2& p : out.points) p = (p - centroid) * s;
  } else {
    if (c.points.size() < 2) throw EmptyInput("open contour needs at least 2 points");
    Vec2 a = c.points.front(), b = c.points.back();
    Vec2 mid = (a + b) * 0.5;
    double chord = dist(a, b);
    if (chord == 0.0) throw EmptyInput("open contour has zero chord");
    double s = 1.0 / chord;
    for (Vec2& p : out.points) p = (p - mid) * s;
  }
  return out;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double denom = norm2(ab);
  if (denom == 0.0) return dist(p, a);
  double s = std::clamp(dot(p - a, ab) / denom, 0.0, 1.0);
  return dist(p, a + ab * s);
}

inline double point_polyline_distance(Vec2 p, const Contour& c) {
  double best = kInf;
  size_t k = c.points.size();
  size_t segments = c.closed ? k : k - 1;
  for (size_t i = 0; i < segments; ++i)
    best = std::min(best, point_segment_distance(p, c.points[i], c.points[(i + 1) % k]));
  return best;
}

// Symmetric Hausdorff distance between two polylines.
inline double hausdorff(const Contour& a, const Contour& b) {
  double h = 0.0;
  for (Vec2 p : a.points) h = std::max(h, point_polyline_distance(p, b));
  for (Vec2 p : b.points) h = std::max(h, point_polyline_distance(p, a));
  return h;
}

inline bool point_in_contour(Vec2 p, const Contour& c) {
  if (!c.closed) return false;
  bool inside = false;
  size_t k = c.points.size();
  for (size_t i = 0, j = k - 1; i < k; j = i++) {
    Vec2 a = c.points[i], b = c.points[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

// Pairwise segment self-intersection check (diagnostic; quadratic).
inline bool contour_simple(const Contour& c) {
  size_t k = c.points.size();
  size_t segments = c.closed ? k : k - 1;
  auto seg = [&](size_t i) {
    return std::pair<Vec2, Vec2>{c.points[i], c.points[(i + 1) % k]};
  };
  auto proper_intersect = [](Vec2 a, Vec2 b, Vec2 p, Vec2 q) {
    double d1 = cross(b - a, p - a), d2 = cross(b - a, q - a);
    double d3 = cross(q - p, a - p), d4 = cross(q - p, b - p);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  };
  for (size_t i = 0; i < segments; ++i) {
    for (size_t j = i + 2; j < segments; ++j) {
      if (i == 0 && c.closed && j == segments - 1) continue;  // shares a vertex
      auto [a, b] = seg(i);
      auto [p, q] = seg(j);
      if (proper_intersect(a, b, p, q)) return false;
    }
  }
  return true;
}

}  // namespace equidist
