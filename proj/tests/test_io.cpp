#include <catch2/catch.hpp>

#include <cmath>

#include "equidist/estimator.hpp"
#include "equidist/io.hpp"

using namespace equidist;

TEST_CASE("json writer") {
  Json j = Json::object();
  j["schema"] = 1;
  j["value"] = 1.0 / 3.0;
  j["name"] = "a\"b";
  Json arr = Json::array();
  arr.push_back(2);
  arr.push_back(0.5);
  arr.push_back(Json());
  j["list"] = std::move(arr);
  std::string s = j.dump();
  CHECK(s == "{\"schema\":1,\"value\":0.33333333333333331,\"name\":\"a\\\"b\","
             "\"list\":[2,0.5,null]}");
  // NaN becomes null
  Json n = Json::object();
  n["x"] = kNaN;
  CHECK(n.dump() == "{\"x\":null}");
}

TEST_CASE("domain parsing") {
  CHECK(parse_domain("square").support({1, 0}) == Approx(1.0));
  CHECK(parse_domain("disk").support({3, 4}) == Approx(5.0));
  CHECK(std::isinf(parse_domain("quadrant").support({1, 0})));

  ConvexDomain p = parse_domain(R"({"type":"polygon","vertices":[[0,0],[2,0],[2,1],[0,1]]})");
  CHECK(p.support({1, 0}) == Approx(2.0));

  ConvexDomain e = parse_domain(
      R"({"type":"ellipse","center":[1,0],"form":[[0.25,0],[0,1]]})");
  CHECK(e.support({1, 0}) == Approx(3.0));

  ConvexDomain u = parse_domain(
      R"({"type":"unbounded","ray_in":[0,1],"vertices":[[0,0]],"ray_out":[1,0]})");
  CHECK(u.support({-1, -1}) == Approx(0.0));

  CHECK_THROWS_AS(parse_domain("pentagon"), ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"type":"polygon"})"), ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"type":"ellipse","center":[0,0],"form":[[1,0.5],[0.2,1]]})"),
                  ParseError);
}

TEST_CASE("field csv round trip") {
  ScalarField f = field(ConvexDomain::square(), 1.0, {-1.2, 1.2, -1.2, 1.2}, 16, 12, 400, 9);
  std::string csv = field_to_csv(f);
  ScalarField g = parse_field_csv(csv);
  REQUIRE(g.nx == f.nx);
  REQUIRE(g.ny == f.ny);
  CHECK(g.xmin == Approx(f.xmin).margin(1e-8));
  CHECK(g.xmax == Approx(f.xmax).margin(1e-8));
  CHECK(g.ymin == Approx(f.ymin).margin(1e-8));
  CHECK(g.ymax == Approx(f.ymax).margin(1e-8));
  for (int iy = 0; iy < f.ny; ++iy)
    for (int ix = 0; ix < f.nx; ++ix) {
      double a = f.at(ix, iy), b = g.at(ix, iy);
      if (std::isnan(a)) {
        CHECK(std::isnan(b));
      } else {
        CHECK(b == Approx(a).margin(1e-8).epsilon(1e-8));
      }
    }
  // header and NaN-as-empty-cell conventions
  CHECK(csv.rfind("x,y,value\n", 0) == 0);
  CHECK(csv.find(",\n") != std::string::npos);
  CHECK_THROWS_AS(parse_field_csv("x,y,value\n"), ParseError);
}

TEST_CASE("svg export") {
  Contour c;
  c.closed = true;
  for (int i = 0; i < 16; ++i) {
    double t = 2.0 * M_PI * i / 16;
    c.points.push_back({std::cos(t), std::sin(t)});
  }
  std::string svg = contours_to_svg({{0.5, {c}}}, -1, 1, -1, 1);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<path") != std::string::npos);
  CHECK(svg.find("Z\"") != std::string::npos);
}
