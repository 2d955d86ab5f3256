#pragma once

// Algebraic least-squares conic fit A x^2 + B xy + C y^2 + D x + E y + F = 0
// under the unit-norm coefficient constraint (smallest singular vector of the
// design matrix), with the data centred and scaled first for conditioning.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "equidist/contours.hpp"
#include "equidist/errors.hpp"
#include "equidist/geometry.hpp"

namespace equidist {

enum class ConicClass { Ellipse, Hyperbola, Degenerate };

inline const char* conic_class_name(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Hyperbola: return "hyperbola";
    default: return "degenerate";
  }
}

struct ConicFit {
  std::array<double, 6> coeffs{};  // A, B, C, D, E, F with |coeffs| = 1
  ConicClass conic_class = ConicClass::Degenerate;
  double residual = 0.0;  // RMS algebraic distance
};

inline ConicFit fit_conic(const std::vector<Vec2>& points) {
  const size_t n = points.size();
  if (n < 6) throw DegenerateFit("conic fit needs at least 6 points");

  Vec2 mean{0, 0};
  for (Vec2 p : points) mean += p;
  mean = mean / static_cast<double>(n);
  double spread = 0.0;
  for (Vec2 p : points) spread += norm2(p - mean);
  spread = std::sqrt(spread / static_cast<double>(n));
  if (spread < 1e-300) throw DegenerateFit("all points coincide");
  double s = spread;

  // collinearity check via the 2x2 covariance
  double sxx = 0, sxy = 0, syy = 0;
  for (Vec2 p : points) {
    Vec2 q = p - mean;
    sxx += q.x * q.x;
    sxy += q.x * q.y;
    syy += q.y * q.y;
  }
  double cov_det = sxx * syy - sxy * sxy;
  if (cov_det <= 1e-20 * (sxx + syy) * (sxx + syy))
    throw DegenerateFit("points are collinear");

  Eigen::MatrixXd d(static_cast<Eigen::Index>(n), 6);
  for (size_t i = 0; i < n; ++i) {
    double x = (points[i].x - mean.x) / s;
    double y = (points[i].y - mean.y) / s;
    d(static_cast<Eigen::Index>(i), 0) = x * x;
    d(static_cast<Eigen::Index>(i), 1) = x * y;
    d(static_cast<Eigen::Index>(i), 2) = y * y;
    d(static_cast<Eigen::Index>(i), 3) = x;
    d(static_cast<Eigen::Index>(i), 4) = y;
    d(static_cast<Eigen::Index>(i), 5) = 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinV);
  Eigen::VectorXd c = svd.matrixV().col(5);

  // back-substitute q = (p - mean)/s, multiply through by s^2
  double at = c(0), bt = c(1), ct = c(2), dt = c(3), et = c(4), ft = c(5);
  std::array<double, 6> k{};
  k[0] = at;
  k[1] = bt;
  k[2] = ct;
  k[3] = -2.0 * at * mean.x - bt * mean.y + dt * s;
  k[4] = -bt * mean.x - 2.0 * ct * mean.y + et * s;
  k[5] = at * mean.x * mean.x + bt * mean.x * mean.y + ct * mean.y * mean.y - dt * s * mean.x -
         et * s * mean.y + ft * s * s;
  double nrm = 0.0;
  for (double v : k) nrm += v * v;
  nrm = std::sqrt(nrm);
  for (double& v : k) v /= nrm;

  double rss = 0.0;
  for (Vec2 p : points) {
    double alg = k[0] * p.x * p.x + k[1] * p.x * p.y + k[2] * p.y * p.y + k[3] * p.x +
                 k[4] * p.y + k[5];
    rss += alg * alg;
  }
  ConicFit out;
  out.coeffs = k;
  out.residual = std::sqrt(rss / static_cast<double>(n));
  double disc = k[1] * k[1] - 4.0 * k[0] * k[2];
  double scale2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  if (scale2 < 1e-16 || std::abs(disc) < 1e-12 * scale2) {
    out.conic_class = ConicClass::Degenerate;
  } else {
    out.conic_class = disc < 0.0 ? ConicClass::Ellipse : ConicClass::Hyperbola;
  }
  return out;
}

// Center/form extraction for an ellipse-classified fit; samples the fitted
// ellipse as a closed contour.
inline Contour sample_fitted_ellipse(const ConicFit& fit, int samples = 256) {
  if (fit.conic_class != ConicClass::Ellipse)
    throw DegenerateFit("fit is not an ellipse");
  double a = fit.coeffs[0], b = fit.coeffs[1], c = fit.coeffs[2];
  double d = fit.coeffs[3], e = fit.coeffs[4], f = fit.coeffs[5];
  double det = 4.0 * a * c - b * b;
  Vec2 center{(-2.0 * c * d + b * e) / det, (-2.0 * a * e + b * d) / det};
  double fc = a * center.x * center.x + b * center.x * center.y + c * center.y * center.y +
              d * center.x + e * center.y + f;
  if (fc >= 0.0) throw DegenerateFit("fitted ellipse is empty");
  double m11 = a / -fc, m12 = 0.5 * b / -fc, m22 = c / -fc;
  SymEigen2 eig = sym_eigen(m11, m12, m22);
  Vec2 u1 = eig.v1, u2 = rot90(eig.v1);
  double r1 = 1.0 / std::sqrt(eig.l1), r2 = 1.0 / std::sqrt(eig.l2);
  Contour out;
  out.closed = true;
  out.points.reserve(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double t = 2.0 * M_PI * i / samples;
    out.points.push_back(center + u1 * (r1 * std::cos(t)) + u2 * (r2 * std::sin(t)));
  }
  return out;
}

}  // namespace equidist
