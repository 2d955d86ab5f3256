#pragma once

// Analytics on convex contours: polar dual, Mahler product (about the
// centroid or the Santalo point), convexity checking, hyperbola deviation in
// an asymptote frame, and field maxima with quadratic refinement.

#include <algorithm>
#include <cmath>
#include <vector>

#include "equidist/conic_fit.hpp"
#include "equidist/contours.hpp"
#include "equidist/errors.hpp"
#include "equidist/estimator.hpp"
#include "equidist/geometry.hpp"

namespace equidist {

enum class MahlerMode { Centroid, Santalo };

struct ContourMetrics {
  double area = kNaN;
  Vec2 centroid{kNaN, kNaN};
  double mahler = kNaN;  // NaN when the contour is open or not convex
  ConicClass conic_class = ConicClass::Degenerate;
  double conic_residual = kNaN;
};

// Cross-product sign test: all turns must share a sign up to a tolerance
// proportional to the squared contour diameter (local edge products would let
// noise on very short marching-squares segments dominate).
inline bool contour_convex(const Contour& c, double rel_tol = 1e-9) {
  if (!c.closed || c.points.size() < 3) return false;
  size_t k = c.points.size();
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (Vec2 p : c.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double diam2 = (xmax - xmin) * (xmax - xmin) + (ymax - ymin) * (ymax - ymin);
  double tol = rel_tol * diam2;
  double orient = 0.0;
  for (size_t i = 0; i < k; ++i) {
    Vec2 e1 = c.points[(i + 1) % k] - c.points[i];
    Vec2 e2 = c.points[(i + 2) % k] - c.points[(i + 1) % k];
    double cr = cross(e1, e2);
    if (cr < -tol && orient > 0) return false;
    if (cr > tol && orient < 0) return false;
    if (std::abs(cr) > tol && orient == 0.0) orient = cr;
  }
  return true;
}

// Andrew monotone chain; returns hull vertices counter-clockwise.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Polar dual of a convex contour about an interior center: the edge with
// outward normal n on the line n.(p - center) = d contributes the vertex n/d.
inline Contour polar_dual(const Contour& poly, Vec2 center) {
  if (!poly.closed || poly.points.size() < 3) throw OpenContour("polar dual needs a closed contour");
  std::vector<Vec2> pts = poly.points;
  double a2 = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) a2 += cross(pts[i], pts[(i + 1) % pts.size()]);
  if (a2 < 0.0) std::reverse(pts.begin(), pts.end());
  Contour dual;
  dual.closed = true;
  size_t k = pts.size();
  for (size_t i = 0; i < k; ++i) {
    Vec2 a = pts[i], b = pts[(i + 1) % k];
    Vec2 e = b - a;
    if (norm2(e) == 0.0) continue;
    Vec2 n{e.y, -e.x};  // outward for CCW
    double d = dot(n, a - center);
    if (d <= 0.0) throw CenterOutside("center is not strictly inside the contour");
    dual.points.push_back(n / d);
  }
  if (dual.points.size() < 3) throw OpenContour("degenerate dual");
  return dual;
}

// area(K) * area(dual of K about c). The contour must be convex up to
// convex_tol (relative hull-area defect); the dual is computed on the hull,
// which coincides with the contour for convex input and keeps microscopic
// discretization dents from corrupting the product.
inline double mahler(const Contour& poly, MahlerMode mode = MahlerMode::Centroid,
                     double convex_tol = 1e-9) {
  if (!poly.closed || poly.points.size() < 3) throw OpenContour("mahler needs a closed contour");
  if (!contour_convex(poly, std::max(convex_tol, 1e-12)))
    throw NonConvex("contour fails the convexity test");
  std::vector<Vec2> hull_pts = convex_hull(poly.points);
  Contour hull;
  hull.closed = true;
  hull.points = hull_pts;
  auto [area_raw, centroid_raw] = contour_area_centroid(poly);
  auto [area_hull, centroid] = contour_area_centroid(hull);
  if (std::abs(area_hull - area_raw) > std::max(convex_tol, 1e-12) * area_hull)
    throw NonConvex("contour deviates from its convex hull beyond tolerance");

  auto dual_area = [&](Vec2 c) {
    Contour d = polar_dual(hull, c);
    return contour_area_centroid(d).first;
  };

  if (mode == MahlerMode::Centroid) return area_hull * dual_area(centroid);

  // Santalo point: minimize the dual area over interior centers.
  // Nelder-Mead on a convex objective, tolerance 1e-8.
  Vec2 scale{std::sqrt(area_hull), std::sqrt(area_hull)};
  std::vector<std::pair<Vec2, double>> simplex = {
      {centroid, dual_area(centroid)},
      {centroid + Vec2{0.05 * scale.x, 0.0}, 0.0},
      {centroid + Vec2{0.0, 0.05 * scale.y}, 0.0}};
  auto safe_dual = [&](Vec2 c) {
    try {
      return dual_area(c);
    } catch (const CenterOutside&) {
      return kInf;
    }
  };
  simplex[1].second = safe_dual(simplex[1].first);
  simplex[2].second = safe_dual(simplex[2].first);
  for (int it = 0; it < 500; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    if (std::abs(simplex[2].second - simplex[0].second) <
        1e-8 * std::max(1.0, std::abs(simplex[0].second)))
      break;
    Vec2 mid = (simplex[0].first + simplex[1].first) * 0.5;
    Vec2 refl = mid + (mid - simplex[2].first);
    double fr = safe_dual(refl);
    if (fr < simplex[0].second) {
      Vec2 exp_pt = mid + (refl - mid) * 2.0;
      double fe = safe_dual(exp_pt);
      simplex[2] = fe < fr ? std::pair{exp_pt, fe} : std::pair{refl, fr};
    } else if (fr < simplex[1].second) {
      simplex[2] = {refl, fr};
    } else {
      Vec2 con = mid + (simplex[2].first - mid) * 0.5;
      double fc = safe_dual(con);
      if (fc < simplex[2].second) {
        simplex[2] = {con, fc};
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].first = (simplex[i].first + simplex[0].first) * 0.5;
          simplex[i].second = safe_dual(simplex[i].first);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return area_hull * simplex[0].second;
}

// Coefficient of variation of the product x*y along the contour after mapping
// into the frame whose columns are the asymptote directions. Zero exactly on
// a hyperbola branch with those asymptotes.
inline double hyperbola_deviation(const Contour& c, const Mat2& asymptote_frame) {
  if (std::abs(asymptote_frame.det()) < 1e-12)
    throw FrameSingular("asymptote frame is singular");
  if (c.points.size() < 2) throw EmptyInput("contour too short");
  Mat2 inv = asymptote_frame.inverse();
  double mean = 0.0;
  std::vector<double> prods;
  prods.reserve(c.points.size());
  for (Vec2 p : c.points) {
    Vec2 q = inv.apply(p);
    prods.push_back(q.x * q.y);
    mean += prods.back();
  }
  mean /= static_cast<double>(prods.size());
  double ss = 0.0;
  for (double v : prods) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(prods.size()));
  if (mean == 0.0) return sd == 0.0 ? 0.0 : kInf;
  return sd / std::abs(mean);
}

// Best-effort metrics bundle for one contour: area/centroid and Mahler for
// closed contours (Mahler NaN when convexity fails), conic fit when there are
// enough points. Normalization before fitting keeps the residual comparable
// across scales.
inline ContourMetrics compute_contour_metrics(const Contour& c,
                                              MahlerMode mode = MahlerMode::Centroid,
                                              double convex_tol = 1e-9) {
  ContourMetrics m;
  if (c.closed && c.points.size() >= 3) {
    auto [area, centroid] = contour_area_centroid(c);
    m.area = area;
    m.centroid = centroid;
    try {
      m.mahler = mahler(c, mode, convex_tol);
    } catch (const Error&) {
      m.mahler = kNaN;
    }
  }
  if (c.points.size() >= 6) {
    try {
      Contour normed = normalize_class(c);
      ConicFit fit = fit_conic(normed.points);
      m.conic_class = fit.conic_class;
      m.conic_residual = fit.residual;
    } catch (const Error&) {
    }
  }
  return m;
}

// Grid argmax refined by a least-squares quadratic on the 3x3 neighborhood.
inline std::pair<Vec2, double> max_locus(const ScalarField& field) {
  int bx = -1, by = -1;
  double bv = -kInf;
  for (int iy = 0; iy < field.ny; ++iy) {
    for (int ix = 0; ix < field.nx; ++ix) {
      double v = field.at(ix, iy);
      if (!std::isnan(v) && v > bv) {
        bv = v;
        bx = ix;
        by = iy;
      }
    }
  }
  if (bx < 0) throw EmptyField("field has no finite values");
  Vec2 p{field.x_at(bx), field.y_at(by)};
  if (bx == 0 || by == 0 || bx + 1 >= field.nx || by + 1 >= field.ny) return {p, bv};
  double z[3][3];
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      double v = field.at(bx + dx, by + dy);
      if (std::isnan(v)) return {p, bv};
      z[dy + 1][dx + 1] = v;
    }
  // Separable least-squares stencil for f = c0 + c1 u + c2 v + c3 u^2 + c4 uv + c5 v^2
  auto sum_w = [&](auto&& w) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) s += w(i - 1, j - 1) * z[j][i];
    return s;
  };
  double c1 = sum_w([](int u, int) { return u / 6.0; });
  double c2 = sum_w([](int, int v) { return v / 6.0; });
  double c3 = sum_w([](int u, int) { return (u * u - 2.0 / 3.0) / 2.0; });
  double c4 = sum_w([](int u, int v) { return u * v / 4.0; });
  double c5 = sum_w([](int, int v) { return (v * v - 2.0 / 3.0) / 2.0; });
  double c0 = sum_w([](int u, int v) { return (5.0 - 3.0 * (u * u + v * v)) / 9.0; });
  // critical point of the quadratic
  double det = 4.0 * c3 * c5 - c4 * c4;
  if (det <= 0.0 || c3 >= 0.0) return {p, bv};
  double u = (-2.0 * c5 * c1 + c4 * c2) / det;
  double v = (-2.0 * c3 * c2 + c4 * c1) / det;
  if (std::abs(u) > 1.0 || std::abs(v) > 1.0) return {p, bv};
  double value = c0 + c1 * u + c2 * v + c3 * u * u + c4 * u * v + c5 * v * v;
  Vec2 refined{p.x + u * field.cell_dx(), p.y + v * field.cell_dy()};
  return {refined, value};
}

}  // namespace equidist
