#pragma once

// Serialization: a small deterministic JSON writer (numbers at 17 significant
// digits, insertion-ordered keys), the domain JSON schema, field CSV
// (9 significant digits, NaN as an empty cell), and SVG contour export.

#include <cstdio>
#include <type_traits>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "equidist/contours.hpp"
#include "equidist/convex_domain.hpp"
#include "equidist/errors.hpp"
#include "equidist/estimator.hpp"

namespace equidist {

// --- JSON writer --------------------------------------------------------

class Json {
 public:
  Json() : kind_(Kind::Null) {}
  Json(bool b) : kind_(Kind::Bool), bool_(b) {}
  Json(double d) : kind_(Kind::Double), num_(d) {}
  template <class T, std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>, int> = 0>
  Json(T i) : kind_(Kind::Int), int_(static_cast<long long>(i)) {}
  Json(const char* s) : kind_(Kind::Str), str_(s) {}
  Json(std::string s) : kind_(Kind::Str), str_(std::move(s)) {}

  static Json object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
  }
  static Json array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
  }

  Json& operator[](const std::string& key) {
    for (auto& [k, v] : members_)
      if (k == key) return v;
    members_.emplace_back(key, Json());
    return members_.back().second;
  }

  void push_back(Json v) { items_.push_back(std::move(v)); }
  bool is_null() const { return kind_ == Kind::Null; }

  std::string dump() const {
    std::string out;
    write(out);
    return out;
  }

 private:
  enum class Kind { Null, Bool, Int, Double, Str, Array, Object };
  Kind kind_;
  bool bool_ = false;
  double num_ = 0.0;
  long long int_ = 0;
  std::string str_;
  std::vector<std::pair<std::string, Json>> members_;
  std::vector<Json> items_;

  static void write_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out.push_back(c);
          }
      }
    }
    out.push_back('"');
  }

  void write(std::string& out) const {
    switch (kind_) {
      case Kind::Null: out += "null"; break;
      case Kind::Bool: out += bool_ ? "true" : "false"; break;
      case Kind::Int: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", int_);
        out += buf;
        break;
      }
      case Kind::Double: {
        if (std::isnan(num_) || std::isinf(num_)) {
          out += "null";
        } else {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", num_);
          out += buf;
        }
        break;
      }
      case Kind::Str: write_escaped(out, str_); break;
      case Kind::Array: {
        out.push_back('[');
        for (size_t i = 0; i < items_.size(); ++i) {
          if (i) out.push_back(',');
          items_[i].write(out);
        }
        out.push_back(']');
        break;
      }
      case Kind::Object: {
        out.push_back('{');
        for (size_t i = 0; i < members_.size(); ++i) {
          if (i) out.push_back(',');
          write_escaped(out, members_[i].first);
          out.push_back(':');
          members_[i].second.write(out);
        }
        out.push_back('}');
        break;
      }
    }
  }
};

// --- domain JSON ---------------------------------------------------------

// Accepts a preset name (square, disk, quadrant), inline JSON, or @file.
inline ConvexDomain parse_domain(const std::string& spec) {
  if (spec == "square") return ConvexDomain::square();
  if (spec == "disk") return ConvexDomain::disk();
  if (spec == "quadrant") return ConvexDomain::quadrant();

  std::string text = spec;
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw ParseError("cannot open domain file: " + spec.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("domain is not a preset and not valid JSON: ") + e.what());
  }
  auto vec2 = [](const nlohmann::json& a) {
    if (!a.is_array() || a.size() != 2) throw ParseError("expected [x, y] pair");
    return Vec2{a[0].get<double>(), a[1].get<double>()};
  };
  try {
    std::string type = j.value("type", "");
    if (type == "polygon") {
      std::vector<Vec2> vs;
      for (const auto& v : j.at("vertices")) vs.push_back(vec2(v));
      return ConvexDomain::polygon(std::move(vs));
    }
    if (type == "ellipse") {
      Vec2 c = vec2(j.at("center"));
      const auto& m = j.at("form");
      if (!m.is_array() || m.size() != 2) throw ParseError("ellipse form must be 2x2");
      double m11 = m[0][0].get<double>(), m12 = m[0][1].get<double>();
      double m21 = m[1][0].get<double>(), m22 = m[1][1].get<double>();
      if (m12 != m21) throw ParseError("ellipse form must be symmetric");
      return ConvexDomain::ellipse(c, m11, m12, m22);
    }
    if (type == "unbounded") {
      std::vector<Vec2> vs;
      for (const auto& v : j.at("vertices")) vs.push_back(vec2(v));
      return ConvexDomain::unbounded(vec2(j.at("ray_in")), std::move(vs), vec2(j.at("ray_out")));
    }
    throw ParseError("unknown domain type: '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed domain JSON: ") + e.what());
  } catch (const InvalidDomain& e) {
    throw ParseError(std::string("invalid domain: ") + e.what());
  }
}

// --- field CSV ------------------------------------------------------------

inline std::string field_to_csv(const ScalarField& f) {
  std::string out = "x,y,value\n";
  char buf[96];
  for (int iy = 0; iy < f.ny; ++iy) {
    for (int ix = 0; ix < f.nx; ++ix) {
      double v = f.at(ix, iy);
      if (std::isnan(v)) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,\n", f.x_at(ix), f.y_at(iy));
      } else {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", f.x_at(ix), f.y_at(iy), v);
      }
      out += buf;
    }
  }
  return out;
}

inline ScalarField parse_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty field CSV");
  std::vector<double> xs, ys, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ParseError("malformed field CSV row: " + line);
    xs.push_back(std::stod(line.substr(0, c1)));
    ys.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    std::string val = line.substr(c2 + 1);
    vs.push_back(val.empty() ? kNaN : std::stod(val));
  }
  if (xs.empty()) throw ParseError("field CSV has no rows");
  // rows are written y-major: consecutive rows share y until x wraps
  int nx = 1;
  while (nx < static_cast<int>(xs.size()) && ys[static_cast<size_t>(nx)] == ys[0]) ++nx;
  if (nx < 2 || xs.size() % static_cast<size_t>(nx) != 0)
    throw ParseError("field CSV is not a full grid");
  int ny = static_cast<int>(xs.size()) / nx;
  if (ny < 2) throw ParseError("field CSV needs at least 2 rows");
  ScalarField f;
  f.nx = nx;
  f.ny = ny;
  f.xmin = xs.front();
  f.xmax = xs[static_cast<size_t>(nx) - 1];
  f.ymin = ys.front();
  f.ymax = ys.back();
  f.values = std::move(vs);
  return f;
}

// --- levels JSON / SVG -----------------------------------------------------

struct LevelMetricsJson {
  bool has_area = false;
  double area = 0.0;
  Vec2 centroid{};
  bool has_mahler = false;
  double mahler = 0.0;
  std::string conic_class;
  bool has_conic = false;
  double conic_residual = 0.0;
};

inline Json contour_to_json(const Contour& c) {
  Json jc = Json::object();
  jc["closed"] = c.closed;
  Json pts = Json::array();
  for (Vec2 p : c.points) {
    Json pair = Json::array();
    pair.push_back(p.x);
    pair.push_back(p.y);
    pts.push_back(std::move(pair));
  }
  jc["points"] = std::move(pts);
  return jc;
}

inline std::string contours_to_svg(const std::vector<std::pair<double, std::vector<Contour>>>& levels,
                                   double xmin, double xmax, double ymin, double ymax) {
  static const char* kPalette[] = {"#1b6ca8", "#e0502a", "#2a9d48", "#9646c3", "#c7a008",
                                   "#2cb5b5", "#d44f8e", "#6b7f26", "#7a5541", "#44518e"};
  double w = xmax - xmin, h = ymax - ymin;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h
      << "\" width=\"800\" height=\"" << (w > 0 ? 800.0 * h / w : 800.0) << "\">\n";
  char buf[64];
  for (size_t li = 0; li < levels.size(); ++li) {
    const char* color = kPalette[li % 10];
    for (const Contour& c : levels[li].second) {
      svg << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << 0.004 * std::max(w, h) << "\" d=\"";
      for (size_t i = 0; i < c.points.size(); ++i) {
        // flip y: SVG grows downward
        std::snprintf(buf, sizeof buf, "%c%.6g %.6g", i == 0 ? 'M' : 'L', c.points[i].x - xmin,
                      ymax - c.points[i].y);
        svg << buf;
      }
      if (c.closed) svg << "Z";
      svg << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
}

}  // namespace equidist
