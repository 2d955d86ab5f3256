#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "equidist/geometry.hpp"
#include "equidist/moduli.hpp"

using namespace equidist;

namespace {

// compare two lattices as sets via sorted ball enumerations
bool same_lattice(const Lattice& a, const Lattice& b, double radius = 3.0, double tol = 1e-9) {
  auto va = a.enumerate_ball(radius * (1 - 1e-12));
  auto vb = b.enumerate_ball(radius * (1 + 1e-12));
  if (va.size() > vb.size()) return false;
  for (const auto& x : va) {
    bool found = false;
    for (const auto& y : vb)
      if (dist(x.ambient, y.ambient) < tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lattice_at examples") {
  Lattice z2 = lattice_at({0, 1, 0});
  CHECK(dist(z2.b1(), {1, 0}) < 1e-15);
  CHECK(dist(z2.b2(), {0, 1}) < 1e-15);

  Lattice sheared = lattice_at({0.5, 1, 0});
  CHECK(dist(sheared.b1(), {1, 0}) < 1e-15);
  CHECK(dist(sheared.b2(), {0.5, 1}) < 1e-15);

  // rotation by pi/2 preserves Z^2 as a set
  Lattice rot = lattice_at({0, 1, M_PI / 2});
  CHECK(same_lattice(rot, z2));

  CHECK(std::abs(cross(sheared.b1(), sheared.b2()) - 1.0) < 1e-14);
}

TEST_CASE("sampler hits the parametrization boundary cleanly") {
  ModuliPoint mp = moduli_point_from_uniforms(0.5, 1.0, 0.0);
  CHECK(mp.x == Approx(0.0).margin(1e-15));
  CHECK(mp.y == Approx(1.0));
  CHECK(mp.theta == 0.0);
}

TEST_CASE("sampler is a pure function of (seed, index)") {
  ModuliSampler s(99);
  ModuliPoint a = s.sample(12345);
  ModuliPoint b = s.sample(12345);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.theta == b.theta);
  ModuliPoint c = ModuliSampler(100).sample(12345);
  CHECK(a.x != c.x);
}

TEST_CASE("sampler moments match independent quadrature") {
  const long long n = 1000000;
  ModuliSampler s(2024);
  double sum_inv_y = 0.0, sum_inv_sqrt_y = 0.0;
  double ss_inv_y = 0.0, ss_inv_sqrt_y = 0.0;
  for (long long i = 0; i < n; ++i) {
    ModuliPoint mp = s.sample(static_cast<std::uint64_t>(i));
    double a = 1.0 / mp.y;
    double b = 1.0 / std::sqrt(mp.y);
    sum_inv_y += a;
    sum_inv_sqrt_y += b;
    ss_inv_y += a * a;
    ss_inv_sqrt_y += b * b;
  }
  double mean_inv_y = sum_inv_y / n;
  double mean_inv_sqrt_y = sum_inv_sqrt_y / n;
  double se_inv_y = std::sqrt((ss_inv_y / n - mean_inv_y * mean_inv_y) / n);
  double se_inv_sqrt_y = std::sqrt((ss_inv_sqrt_y / n - mean_inv_sqrt_y * mean_inv_sqrt_y) / n);

  // E[1/y] by independent 2-d quadrature over the fundamental domain
  auto inner_invy = [](double x) {
    double ylo = std::sqrt(1.0 - x * x);
    double total = 0.0;
    double lo = ylo;
    while (lo < 1e8) {
      double hi = lo * 4.0;
      total += adaptive_simpson([](double y) { return std::pow(y, -3.0); }, lo, hi, 1e-14);
      lo = hi;
    }
    return total;
  };
  double expect_inv_y = (3.0 / M_PI) * adaptive_simpson(inner_invy, -0.5, 0.5, 1e-12);
  CHECK(std::abs(mean_inv_y - expect_inv_y) <= 4.0 * se_inv_y);

  // E[y^-1/2] is the disk-centre value; 0.682 up to its own third decimal
  CHECK(std::abs(mean_inv_sqrt_y - 0.682) < 0.005);
  auto inner_52 = [](double x) {
    double ylo = std::sqrt(1.0 - x * x);
    double total = 0.0;
    double lo = ylo;
    while (lo < 1e8) {
      double hi = lo * 4.0;
      total += adaptive_simpson([](double y) { return std::pow(y, -2.5); }, lo, hi, 1e-14);
      lo = hi;
    }
    return total;
  };
  double expect_52 = (3.0 / M_PI) * adaptive_simpson(inner_52, -0.5, 0.5, 1e-12);
  CHECK(std::abs(mean_inv_sqrt_y - expect_52) <= 4.0 * se_inv_sqrt_y);
}

TEST_CASE("sampler x-marginal passes a chi-square test") {
  const long long n = 1000000;
  const int bins = 50;
  std::vector<long long> counts(bins, 0);
  ModuliSampler s(31337);
  for (long long i = 0; i < n; ++i) {
    double x = s.sample(static_cast<std::uint64_t>(i)).x;
    int b = static_cast<int>((x + 0.5) * bins);
    b = std::min(std::max(b, 0), bins - 1);
    ++counts[b];
  }
  // expected mass per bin from the marginal cdf (3/pi) asin(x)
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    double lo = -0.5 + static_cast<double>(b) / bins;
    double hi = lo + 1.0 / bins;
    double pmass = (3.0 / M_PI) * (std::asin(hi) - std::asin(lo));
    double expect = pmass * n;
    chi2 += (counts[b] - expect) * (counts[b] - expect) / expect;
  }
  // chi-square with 49 dof, 99th percentile
  CHECK(chi2 < 74.919);
}

TEST_CASE("quadrature grid bookkeeping") {
  auto grid = quadrature_grid(50.0, 16, 16, 4);
  double total = 0.0;
  for (const auto& nd : grid) total += nd.weight;
  CHECK(total == Approx(1.0 - cusp_tail_fraction(50.0)).epsilon(1e-12));

  // integrand 1 integrates to the retained fraction; y^-1/2 lands near 0.682
  auto grid2 = quadrature_grid(50.0, 64, 64, 8);
  double val = 0.0;
  for (const auto& nd : grid2) val += nd.weight / std::sqrt(nd.point.y);
  CHECK(std::abs(val - 0.682) < 0.005);

  CHECK_THROWS_AS(quadrature_grid(0.5, 8, 8, 8), InvalidGrid);
  CHECK_THROWS_AS(quadrature_grid(10.0, 1, 8, 8), InvalidGrid);
}

TEST_CASE("cusp tail bound") {
  CHECK(tail_bound(1.0, 1.0, 100.0) == Approx((2.0 / M_PI) * 1e-3).epsilon(1e-12));
  CHECK(tail_bound(1.0, 1.0, 400.0) < tail_bound(1.0, 1.0, 100.0));
  CHECK(tail_bound(2.0, 0.5, 1e12) < 1e-10);
  CHECK_THROWS_AS(tail_bound(kInf, 1.0, 100.0), UnboundedDomain);

  // empirical: quadrature of y^-1/2 truncated at 100 vs 1e4 differs by at
  // most the bound at 100
  auto g1 = quadrature_grid(100.0, 48, 64, 4);
  auto g2 = quadrature_grid(10000.0, 48, 96, 4);
  double v1 = 0.0, v2 = 0.0;
  for (const auto& nd : g1) v1 += nd.weight / std::sqrt(nd.point.y);
  for (const auto& nd : g2) v2 += nd.weight / std::sqrt(nd.point.y);
  CHECK(std::abs(v2 - v1) <= tail_bound(1.0, 1.0, 100.0));
}

TEST_CASE("reduce_to_fundamental examples") {
  ModuliPoint a = reduce_to_fundamental({1, 0}, {0, 1});
  CHECK(a.x == Approx(0.0).margin(1e-12));
  CHECK(a.y == Approx(1.0));
  CHECK(a.theta == Approx(0.0).margin(1e-12));

  ModuliPoint b = reduce_to_fundamental({1, 0}, {2.5, 1});
  CHECK(std::abs(b.x) == Approx(0.5));
  CHECK(b.y == Approx(1.0));
  CHECK(b.theta == Approx(0.0).margin(1e-12));

  Mat2 rot = Mat2::rotation(M_PI / 3.0);
  ModuliPoint c = reduce_to_fundamental(rot.apply({1, 0}), rot.apply({0, 1}));
  CHECK(c.x == Approx(0.0).margin(1e-12));
  CHECK(c.y == Approx(1.0));
  CHECK(c.theta == Approx(M_PI / 3.0));

  CHECK_THROWS_AS(reduce_to_fundamental({2, 0}, {0, 1}), DegenerateBasis);
}

TEST_CASE("round trip through the fundamental domain") {
  ModuliSampler s(555);
  for (int k = 0; k < 1000; ++k) {
    ModuliPoint mp = s.sample(static_cast<std::uint64_t>(k));
    if (mp.y > 1e4) continue;  // keep the set comparison radius sane
    Lattice lat = lattice_at(mp);
    ModuliPoint back = reduce_to_fundamental(lat);
    CHECK(std::abs(back.x) <= 0.5 + 1e-9);
    CHECK(back.x * back.x + back.y * back.y >= 1.0 - 1e-9);
    CHECK(back.theta >= 0.0);
    CHECK(back.theta < M_PI + 1e-12);
    Lattice again = lattice_at(back);
    // same set: compare small balls
    double r = 2.5 * norm(lat.reduced_b1());
    auto va = lat.enumerate_ball(r);
    auto vb = again.enumerate_ball(r * (1 + 1e-9));
    REQUIRE(va.size() <= vb.size());
    for (const auto& x : va) {
      bool found = false;
      for (const auto& y : vb)
        if (dist(x.ambient, y.ambient) < 1e-8 * std::max(1.0, norm(x.ambient))) {
          found = true;
          break;
        }
      CHECK(found);
    }
  }
}

TEST_CASE("shortest vector length is y^-1/2 on the fundamental domain") {
  ModuliSampler s(777);
  for (int k = 0; k < 1000; ++k) {
    ModuliPoint mp = s.sample(static_cast<std::uint64_t>(k));
    Lattice lat = lattice_at(mp);
    CHECK(norm(lat.shortest_vector().ambient) ==
          Approx(1.0 / std::sqrt(mp.y)).epsilon(1e-10));
  }
}

TEST_CASE("theta period pi") {
  ModuliPoint mp{0.3, 1.7, 1.1};
  Lattice a = lattice_at(mp);
  // direct construction at theta + pi (outside the canonical range)
  double s = 1.0 / std::sqrt(mp.y);
  Mat2 rot = Mat2::rotation(mp.theta + M_PI);
  Lattice b = Lattice::unchecked(rot.apply({s, 0.0}), rot.apply({mp.x * s, mp.y * s}));
  CHECK(same_lattice(a, b));
}
