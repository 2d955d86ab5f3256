#pragma once

// Convex planar domains: polygons, ellipses {(p-c)^T M (p-c) <= 1}, and
// unbounded polygons (two recession rays joined by a convex vertex chain).
// All geometry queries used by the tropical-distance machinery live here:
// support function, tropical coefficients, boundary distance, containment,
// polar cone of the recession cone, linear images, circumradius.

#include <algorithm>
#include <cmath>
#include <vector>

#include "equidist/errors.hpp"
#include "equidist/geometry.hpp"

namespace equidist {

enum class Containment { Interior, Boundary, Exterior };

enum class DomainKind { Polygon, Ellipse, UnboundedPolygon };

// Polar cone of the recession cone: the closed set of directions with finite
// support. Either the full plane (bounded domains) or a salient cone given by
// its two extreme rays.
struct ConeDesc {
  bool full_plane = true;
  Vec2 ray1{}, ray2{};
};

class ConvexDomain {
 public:
  static constexpr double kMergeTol = 1e-12;     // vertex dedupe / collinear merge
  static constexpr double kBoundaryTol = 1e-9;   // containment band

  // --- constructors ---------------------------------------------------

  static ConvexDomain polygon(std::vector<Vec2> vertices) {
    ConvexDomain d;
    d.kind_ = DomainKind::Polygon;
    d.vertices_ = clean_polygon(std::move(vertices));
    return d;
  }

  static ConvexDomain ellipse(Vec2 center, double m11, double m12, double m22) {
    if (!(m11 > 0.0) || !(m11 * m22 - m12 * m12 > 0.0))
      throw InvalidDomain("ellipse form must be symmetric positive definite");
    ConvexDomain d;
    d.kind_ = DomainKind::Ellipse;
    d.center_ = center;
    d.m11_ = m11;
    d.m12_ = m12;
    d.m22_ = m22;
    return d;
  }

  // Origin-centered ellipse from the quadratic a x^2 + b xy + c y^2 = 1.
  static ConvexDomain ellipse_from_quadratic(double a, double b, double c) {
    return ellipse({0.0, 0.0}, a, 0.5 * b, c);
  }

  static ConvexDomain unbounded(Vec2 ray_in, std::vector<Vec2> vertices, Vec2 ray_out) {
    if (vertices.empty()) throw InvalidDomain("unbounded polygon needs at least one vertex");
    ray_in = normalized(ray_in);
    ray_out = normalized(ray_out);
    if (norm2(ray_in) == 0.0 || norm2(ray_out) == 0.0)
      throw InvalidDomain("recession rays must be nonzero");
    double cr = cross(ray_in, ray_out);
    if (std::abs(cr) <= 1e-12)
      throw InvalidDomain("recession rays must not be parallel or opposite");
    if (!chain_valid(ray_in, vertices, ray_out)) {
      // A cone given with the rays in the other order describes the same set;
      // normalize instead of rejecting.
      std::vector<Vec2> rev(vertices.rbegin(), vertices.rend());
      if (!chain_valid(ray_out, rev, ray_in))
        throw InvalidDomain("vertex chain is not convex counter-clockwise between the rays");
      std::swap(ray_in, ray_out);
      vertices = std::move(rev);
    }
    ConvexDomain d;
    d.kind_ = DomainKind::UnboundedPolygon;
    d.vertices_ = std::move(vertices);
    d.ray_in_ = ray_in;
    d.ray_out_ = ray_out;
    return d;
  }

  // Presets used throughout the CLI and tests.
  static ConvexDomain square() { return polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }
  static ConvexDomain disk() { return ellipse({0, 0}, 1.0, 0.0, 1.0); }
  static ConvexDomain quadrant() { return unbounded({0, 1}, {{0, 0}}, {1, 0}); }

  // --- accessors ------------------------------------------------------

  DomainKind kind() const { return kind_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  Vec2 ellipse_center() const { return center_; }
  // Ellipse quadratic form entries [[m11,m12],[m12,m22]].
  double m11() const { return m11_; }
  double m12() const { return m12_; }
  double m22() const { return m22_; }
  Vec2 ray_in() const { return ray_in_; }
  Vec2 ray_out() const { return ray_out_; }
  bool bounded() const { return kind_ != DomainKind::UnboundedPolygon; }

  // --- support function -----------------------------------------------

  // sup_{p in domain} d.p; +inf exactly when d pairs positively with a
  // recession direction.
  double support(Vec2 d) const {
    switch (kind_) {
      case DomainKind::Polygon:
        return vertex_max(d);
      case DomainKind::Ellipse: {
        double det = m11_ * m22_ - m12_ * m12_;
        double q = (m22_ * d.x * d.x - 2.0 * m12_ * d.x * d.y + m11_ * d.y * d.y) / det;
        return dot(d, center_) + std::sqrt(std::max(0.0, q));
      }
      case DomainKind::UnboundedPolygon: {
        double s = std::abs(d.x) + std::abs(d.y);  // cheap norm-equivalent scale
        if (dot(d, ray_in_) > kMergeTol * s || dot(d, ray_out_) > kMergeTol * s) return kInf;
        return vertex_max(d);
      }
    }
    return kNaN;
  }

  // Coefficient of the tropical series: c_d = -inf_{p} d.p = support(-d).
  double tropical_coefficient(Vec2 d) const { return support(-d); }

  // --- containment and distances ---------------------------------------

  Containment contains(Vec2 p, double tol = kBoundaryTol) const {
    double s = signed_inner_distance(p);
    if (s > tol) return Containment::Interior;
    if (s < -tol) return Containment::Exterior;
    return Containment::Boundary;
  }

  // Euclidean distance from an inside point to the boundary.
  double boundary_distance(Vec2 p) const {
    double s = signed_inner_distance(p);
    if (s < -kBoundaryTol) throw PointOutside("point lies outside the domain");
    if (kind_ == DomainKind::Ellipse) return exact_ellipse_boundary_distance(p);
    return std::max(0.0, s);
  }

  ConeDesc polar_cone() const {
    if (bounded()) return {};
    ConeDesc c;
    c.full_plane = false;
    c.ray1 = polar_extreme(ray_in_, ray_out_);
    c.ray2 = polar_extreme(ray_out_, ray_in_);
    return c;
  }

  // Dual of the recession cone: directions with finite tropical coefficient.
  ConeDesc finite_coefficient_cone() const {
    ConeDesc c = polar_cone();
    if (!c.full_plane) {
      c.ray1 = -c.ray1;
      c.ray2 = -c.ray2;
    }
    return c;
  }

  ConvexDomain apply_linear(const Mat2& a) const {
    double det = a.det();
    if (std::abs(det) < 1e-12) throw SingularMatrix("transform determinant below 1e-12");
    switch (kind_) {
      case DomainKind::Polygon: {
        std::vector<Vec2> vs;
        vs.reserve(vertices_.size());
        for (Vec2 v : vertices_) vs.push_back(a.apply(v));
        return polygon(std::move(vs));
      }
      case DomainKind::Ellipse: {
        Mat2 ai = a.inverse();
        Mat2 m{m11_, m12_, m12_, m22_};
        Mat2 mp = ai.transpose() * m * ai;
        return ellipse(a.apply(center_), mp.a11, 0.5 * (mp.a12 + mp.a21), mp.a22);
      }
      case DomainKind::UnboundedPolygon: {
        std::vector<Vec2> vs;
        vs.reserve(vertices_.size());
        for (Vec2 v : vertices_) vs.push_back(a.apply(v));
        if (det > 0.0) return unbounded(a.apply(ray_in_), std::move(vs), a.apply(ray_out_));
        std::reverse(vs.begin(), vs.end());
        return unbounded(a.apply(ray_out_), std::move(vs), a.apply(ray_in_));
      }
    }
    throw InvalidDomain("unreachable");
  }

  // sup_{q in domain} |q - p|; +inf for unbounded domains.
  double circumradius_about(Vec2 p) const {
    switch (kind_) {
      case DomainKind::UnboundedPolygon:
        return kInf;
      case DomainKind::Polygon: {
        double r2 = 0.0;
        for (Vec2 v : vertices_) r2 = std::max(r2, norm2(v - p));
        return std::sqrt(r2);
      }
      case DomainKind::Ellipse: {
        double best = 0.0;
        double t_best = 0.0;
        for (int k = 0; k < 64; ++k) {
          double t = 2.0 * M_PI * k / 64.0;
          double d2 = norm2(ellipse_point(t) - p);
          if (d2 > best) {
            best = d2;
            t_best = t;
          }
        }
        double win = 2.0 * M_PI / 64.0;
        double t = minimize_golden([&](double u) { return -norm2(ellipse_point(u) - p); },
                                   t_best - win, t_best + win, 1e-13);
        return norm(ellipse_point(t) - p);
      }
    }
    return kNaN;
  }

  // Boundary parametrization (ellipse only), t in [0, 2pi).
  Vec2 ellipse_point(double t) const {
    SymEigen2 e = sym_eigen(m11_, m12_, m22_);
    Vec2 u1 = e.v1;
    Vec2 u2 = rot90(u1);
    double r1 = 1.0 / std::sqrt(e.l1);
    double r2 = 1.0 / std::sqrt(e.l2);
    return center_ + u1 * (r1 * std::cos(t)) + u2 * (r2 * std::sin(t));
  }

  // Outward normal direction of the boundary nearest to p (used by callers
  // that want a supporting direction at near-boundary points).
  Vec2 outward_normal_near(Vec2 p) const {
    switch (kind_) {
      case DomainKind::Ellipse: {
        Vec2 q = p - center_;
        Vec2 g{2.0 * (m11_ * q.x + m12_ * q.y), 2.0 * (m12_ * q.x + m22_ * q.y)};
        return norm2(g) > 0 ? normalized(g) : Vec2{1.0, 0.0};
      }
      default: {
        // nearest supporting line among edges / rays
        Vec2 best_n{1.0, 0.0};
        double best = kInf;
        for_each_boundary_line([&](Vec2 base, Vec2 dir) {
          double sd = cross(dir, p - base) / norm(dir);
          if (sd < best) {
            best = sd;
            best_n = -normalized(rot90(dir));
          }
        });
        return best_n;
      }
    }
  }

 private:
  DomainKind kind_ = DomainKind::Polygon;
  std::vector<Vec2> vertices_;       // polygon or chain vertices, CCW
  Vec2 center_{};                    // ellipse
  double m11_ = 1, m12_ = 0, m22_ = 1;
  Vec2 ray_in_{}, ray_out_{};        // unbounded

  double vertex_max(Vec2 d) const {
    double best = -kInf;
    for (Vec2 v : vertices_) best = std::max(best, dot(d, v));
    return best;
  }

  // Signed distance to the boundary measured by supporting lines: positive
  // inside, negative outside. Exact for interior points of polygonal domains;
  // for ellipses it is the ray-through-center estimate (used for banding only).
  double signed_inner_distance(Vec2 p) const {
    if (kind_ == DomainKind::Ellipse) {
      Vec2 q = p - center_;
      double qq = m11_ * q.x * q.x + 2.0 * m12_ * q.x * q.y + m22_ * q.y * q.y;
      double r = std::sqrt(std::max(0.0, qq));
      if (r == 0.0) {
        SymEigen2 e = sym_eigen(m11_, m12_, m22_);
        return 1.0 / std::sqrt(e.l2);  // distance along the short axis
      }
      return norm(q) * (1.0 - r) / r;
    }
    double best = kInf;
    for_each_boundary_line([&](Vec2 base, Vec2 dir) {
      best = std::min(best, cross(dir, p - base) / norm(dir));
    });
    return best;
  }

  double exact_ellipse_boundary_distance(Vec2 p) const {
    double best = kInf;
    double t_best = 0.0;
    for (int k = 0; k < 64; ++k) {
      double t = 2.0 * M_PI * k / 64.0;
      double d2 = norm2(ellipse_point(t) - p);
      if (d2 < best) {
        best = d2;
        t_best = t;
      }
    }
    double win = 2.0 * M_PI / 64.0;
    double t = minimize_golden([&](double u) { return norm2(ellipse_point(u) - p); },
                               t_best - win, t_best + win, 1e-13);
    return norm(ellipse_point(t) - p);
  }

  // Visit every boundary supporting line as (base point, travel direction),
  // oriented with the interior on the left.
  template <class F>
  void for_each_boundary_line(F&& f) const {
    if (kind_ == DomainKind::Polygon) {
      size_t n = vertices_.size();
      for (size_t i = 0; i < n; ++i) f(vertices_[i], vertices_[(i + 1) % n] - vertices_[i]);
    } else if (kind_ == DomainKind::UnboundedPolygon) {
      f(vertices_.front(), -ray_in_);
      for (size_t i = 0; i + 1 < vertices_.size(); ++i)
        f(vertices_[i], vertices_[i + 1] - vertices_[i]);
      f(vertices_.back(), ray_out_);
    }
  }

  static Vec2 polar_extreme(Vec2 this_ray, Vec2 other_ray) {
    Vec2 d = rot90(this_ray);
    if (dot(d, other_ray) > 0.0) d = -d;
    return normalized(d);
  }

  static bool chain_valid(Vec2 ray_in, const std::vector<Vec2>& vs, Vec2 ray_out) {
    // Boundary travel directions: -ray_in, chain edges, +ray_out must all turn
    // left (counter-clockwise with the interior on the left).
    std::vector<Vec2> dirs;
    dirs.push_back(-ray_in);
    for (size_t i = 0; i + 1 < vs.size(); ++i) {
      Vec2 e = vs[i + 1] - vs[i];
      if (norm2(e) < kMergeTol * kMergeTol) return false;
      dirs.push_back(e);
    }
    dirs.push_back(ray_out);
    for (size_t i = 0; i + 1 < dirs.size(); ++i) {
      if (cross(dirs[i], dirs[i + 1]) <= 0.0) return false;
    }
    return true;
  }

  static std::vector<Vec2> clean_polygon(std::vector<Vec2> vs) {
    if (vs.size() < 3) throw InvalidDomain("polygon needs at least 3 vertices");
    // orientation: make counter-clockwise
    double area2 = 0.0;
    for (size_t i = 0; i < vs.size(); ++i) area2 += cross(vs[i], vs[(i + 1) % vs.size()]);
    if (area2 < 0.0) std::reverse(vs.begin(), vs.end());

    double scale = 0.0;
    for (Vec2 v : vs) scale = std::max(scale, std::max(std::abs(v.x), std::abs(v.y)));
    scale = std::max(scale, 1e-30);

    // dedupe consecutive equal vertices
    std::vector<Vec2> out;
    for (Vec2 v : vs) {
      if (out.empty() || dist(out.back(), v) > kMergeTol * scale) out.push_back(v);
    }
    while (out.size() > 1 && dist(out.front(), out.back()) <= kMergeTol * scale) out.pop_back();

    // merge collinear triples
    bool changed = true;
    while (changed && out.size() > 3) {
      changed = false;
      for (size_t i = 0; i < out.size(); ++i) {
        Vec2 a = out[(i + out.size() - 1) % out.size()];
        Vec2 b = out[i];
        Vec2 c = out[(i + 1) % out.size()];
        if (std::abs(cross(b - a, c - b)) <= kMergeTol * scale * scale) {
          out.erase(out.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
    }
    if (out.size() < 3) throw InvalidDomain("polygon degenerates after merging");

    double a2 = 0.0;
    for (size_t i = 0; i < out.size(); ++i) a2 += cross(out[i], out[(i + 1) % out.size()]);
    if (a2 <= kMergeTol * scale * scale) throw InvalidDomain("polygon has (near) zero area");

    for (size_t i = 0; i < out.size(); ++i) {
      Vec2 e1 = out[(i + 1) % out.size()] - out[i];
      Vec2 e2 = out[(i + 2) % out.size()] - out[(i + 1) % out.size()];
      if (cross(e1, e2) <= 0.0) throw InvalidDomain("polygon is not strictly convex");
    }
    return out;
  }
};

}  // namespace equidist
