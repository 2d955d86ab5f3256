#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "equidist/lattice.hpp"
#include "equidist/moduli.hpp"
#include "oracles.hpp"

using namespace equidist;

TEST_CASE("gauss reduction examples") {
  Lattice a({1, 0}, {5, 1});
  CHECK(norm(a.reduced_b1()) == Approx(1.0));
  CHECK(norm(a.reduced_b2()) == Approx(1.0));
  CHECK(std::abs(dot(a.reduced_b1(), a.reduced_b2())) < 1e-12);

  Lattice b({1, 0}, {0.5, 1});
  CHECK(b.reduced_b1() == Vec2{1, 0});
  CHECK(b.reduced_b2() == Vec2{0.5, 1});

  Lattice c = Lattice::unchecked({2, 0}, {0, 0.5});
  CHECK(c.reduced_b1() == Vec2{0, 0.5});
}

TEST_CASE("reduction is a unimodular change of basis") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto integer_coords = [](Vec2 v, Vec2 b1, Vec2 b2) {
    double d = cross(b1, b2);
    double alpha = cross(v, b2) / d;
    double beta = cross(b1, v) / d;
    return std::abs(alpha - std::nearbyint(alpha)) < 1e-6 &&
           std::abs(beta - std::nearbyint(beta)) < 1e-6;
  };
  for (int k = 0; k < 1000; ++k) {
    ModuliPoint mp{-0.5 + u(rng), 1.0 / std::max(u(rng), 1e-3), u(rng) * M_PI};
    if (mp.x * mp.x + mp.y * mp.y < 1.0) continue;
    Lattice base = lattice_at(mp);
    // hide the reduced form behind a unimodular shear
    Vec2 b1 = base.b1() + base.b2() * 3.0;
    Vec2 b2 = base.b1() * 2.0 + base.b2() * 7.0;
    Lattice lat = Lattice::unchecked(b1, b2);
    CHECK(std::abs(std::abs(cross(lat.reduced_b1(), lat.reduced_b2())) -
                   std::abs(cross(b1, b2))) < 1e-9);
    // same integer span in both directions
    CHECK(integer_coords(lat.reduced_b1(), b1, b2));
    CHECK(integer_coords(lat.reduced_b2(), b1, b2));
    CHECK(integer_coords(b1, lat.reduced_b1(), lat.reduced_b2()));
    CHECK(integer_coords(b2, lat.reduced_b1(), lat.reduced_b2()));
    // reduced invariants
    CHECK(norm2(lat.reduced_b1()) <= norm2(lat.reduced_b2()) * (1 + 1e-12));
    CHECK(std::abs(dot(lat.reduced_b1(), lat.reduced_b2())) <=
          0.5 * norm2(lat.reduced_b1()) * (1 + 1e-9));
  }
}

TEST_CASE("shortest vector") {
  Lattice z2({1, 0}, {0, 1});
  LatticeVector s = z2.shortest_vector();
  CHECK(norm(s.ambient) == Approx(1.0));
  CHECK(s.m == 1);
  CHECK(s.n == 0);

  // hexagonal point of the fundamental domain
  ModuliPoint hex{0.5, std::sqrt(3.0) / 2.0, 0.0};
  Lattice hex_lat = lattice_at(hex);
  double brute = oracle::naive_shortest_norm(hex_lat, 50);
  CHECK(norm(hex_lat.shortest_vector().ambient) == Approx(brute).epsilon(1e-12));
  CHECK(brute == Approx(std::sqrt(2.0 / std::sqrt(3.0))).epsilon(1e-12));

  Lattice tall = lattice_at({0.0, 4.0, 0.0});
  CHECK(norm(tall.shortest_vector().ambient) == Approx(0.5));
}

TEST_CASE("ball enumeration examples") {
  Lattice z2({1, 0}, {0, 1});
  CHECK(z2.enumerate_ball(1.0).size() == 4);
  CHECK(z2.enumerate_ball(1.5).size() == 8);

  Lattice tall = lattice_at({0.0, 4.0, 0.0});
  auto v = tall.enumerate_ball(0.6);
  REQUIRE(v.size() == 2);
  CHECK(norm(v[0].ambient) == Approx(0.5));
  CHECK(norm(v[1].ambient) == Approx(0.5));
}

TEST_CASE("cone enumeration examples") {
  Lattice z2({1, 0}, {0, 1});
  auto c1 = z2.enumerate_cone({1, 0}, {0, 1}, 1.0);
  REQUIRE(c1.size() == 2);  // (1,0) and (0,1)
  for (const auto& v : c1) {
    CHECK(v.ambient.x >= -1e-12);
    CHECK(v.ambient.y >= -1e-12);
  }
  auto c2 = z2.enumerate_cone({1, 1}, {1, -1}, 1.1);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].ambient.x == Approx(1.0));
  CHECK(std::abs(c2[0].ambient.y) < 1e-12);

  Lattice tall = lattice_at({0.0, 4.0, 0.0});
  auto c3 = tall.enumerate_cone({0, 1}, {1, 0}, 0.6);
  REQUIRE(c3.size() == 1);
  CHECK(c3[0].ambient.x == Approx(0.5));
}

TEST_CASE("enumeration equals the naive double loop") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    ModuliPoint mp{-0.5 + u(rng), 1.0 + 3.0 * u(rng), u(rng) * M_PI};
    Lattice lat = lattice_at(mp);
    double radius = 0.3 + 3.0 * u(rng);
    auto mine = lat.enumerate_ball(radius);
    auto naive = oracle::naive_ball(lat, radius, 100);
    REQUIRE(mine.size() == naive.size());
    for (size_t i = 0; i < mine.size(); ++i)
      CHECK(norm(mine[i].ambient) == Approx(norm(naive[i])).margin(1e-12));
  }
}

TEST_CASE("shortest is minimal over any enumerated ball") {
  std::mt19937_64 rng(4243);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    ModuliPoint mp{-0.5 + u(rng), 1.0 / std::max(u(rng), 0.05), u(rng) * M_PI};
    if (mp.x * mp.x + mp.y * mp.y < 1.0) continue;
    Lattice lat = lattice_at(mp);
    double s = norm(lat.shortest_vector().ambient);
    for (const auto& v : lat.enumerate_ball(3.0 * s)) CHECK(norm(v.ambient) >= s * (1 - 1e-12));
  }
}

TEST_CASE("hexagonal extremality bound on unit-covolume lattices") {
  std::mt19937_64 rng(4244);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    ModuliPoint mp = moduli_point_from_uniforms(u(rng), std::max(u(rng), 1e-6), u(rng));
    Lattice lat = lattice_at(mp);
    CHECK(norm2(lat.shortest_vector().ambient) <= 2.0 / std::sqrt(3.0) + 1e-9);
  }
}

TEST_CASE("lattice validation errors") {
  CHECK_THROWS_AS(Lattice({1, 0}, {2, 0}), DegenerateBasis);
  CHECK_THROWS_AS(Lattice({2, 0}, {0, 1}), DegenerateBasis);  // co-area 2
  CHECK_NOTHROW(Lattice::unchecked({2, 0}, {0, 1}));
  CHECK_THROWS_AS(Lattice({1, 0}, {0, 1}).enumerate_ball(1e6), RegionTooLarge);
}
