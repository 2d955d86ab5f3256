// equidist: evaluate lattice-averaged distance functions of convex planar
// domains, map scalar fields, extract level sets, and run the experiment
// suites. All outputs are pure functions of the flags and seed; the worker
// count never changes results.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equidist/contour_metrics.hpp"
#include "equidist/contours.hpp"
#include "equidist/conic_fit.hpp"
#include "equidist/convex_domain.hpp"
#include "equidist/estimator.hpp"
#include "equidist/experiments.hpp"
#include "equidist/io.hpp"
#include "equidist/moduli.hpp"
#include "equidist/tropical.hpp"

namespace {

using namespace equidist;

Vec2 parse_pair(const std::string& s, const char* what) {
  size_t c = s.find(',');
  if (c == std::string::npos) throw ParseError(std::string(what) + " must be 'a,b'");
  try {
    return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
  } catch (const std::exception&) {
    throw ParseError(std::string(what) + " must be numeric 'a,b'");
  }
}

std::pair<int, int> parse_grid(const std::string& s) {
  size_t c = s.find('x');
  if (c == std::string::npos) c = s.find('X');
  if (c == std::string::npos) throw ParseError("--grid must be 'NXxNY'");
  try {
    return {std::stoi(s.substr(0, c)), std::stoi(s.substr(c + 1))};
  } catch (const std::exception&) {
    throw ParseError("--grid must be 'NXxNY'");
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t c = s.find(',', pos);
    if (c == std::string::npos) c = s.size();
    out.push_back(std::stod(s.substr(pos, c - pos)));
    pos = c + 1;
  }
  return out;
}

BBox parse_bbox(const std::string& s) {
  std::vector<double> v = parse_list(s);
  if (v.size() != 4) throw ParseError("--bbox must be 'xmin,xmax,ymin,ymax'");
  return {v[0], v[1], v[2], v[3]};
}

BBox default_bbox(const ConvexDomain& d) {
  if (!d.bounded())
    throw UnboundedDomain("--bbox is required for unbounded domains");
  return {-d.support({-1, 0}), d.support({1, 0}), -d.support({0, -1}), d.support({0, 1})};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (text.empty() || text.back() != '\n') std::fputc('\n', stdout);
  } else {
    write_text_file(out_path, text);
  }
}

const char* method_name(Method m) { return m == Method::MonteCarlo ? "mc" : "quad"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equidist: lattice-averaged distance fields of convex planar domains"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");  // frees -h/--h for the exponent
  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print help and exit");
    return sub;
  };

  // common option storage
  std::string domain_spec = "square", point_str, moduli_str, bbox_str, grid_str = "101x101";
  std::string out_path, svg_path, field_path, levels_str, anchor_str;
  double h = 1.0, ymax = 100.0;
  long long samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool literal_def = false, quick = false;
  std::string integrator = "mc";
  int cases = 100, n_levels = 8;
  std::string quad_grid = "64,64,16";

  auto* c_eval = add_sub("eval", "estimate the distance value at a point");
  c_eval->add_option("--domain", domain_spec, "preset (square|disk|quadrant), inline JSON, or @file");
  c_eval->add_option("--point", point_str, "evaluation point 'px,py'")->required();
  c_eval->add_option("--h", h, "Hoelder exponent");
  c_eval->add_option("--samples", samples, "Monte Carlo sample count");
  c_eval->add_option("--seed", seed, "random seed");
  c_eval->add_option("--integrator", integrator, "mc or quad");
  c_eval->add_option("--ymax", ymax, "cusp truncation height (quad)");
  c_eval->add_option("--quad-grid", quad_grid, "quadrature counts 'nx,ny,ntheta'");
  c_eval->add_flag("--literal-def", literal_def, "literal defining-formula normalization");
  c_eval->add_option("--threads", threads, "worker count (0 = auto)");
  c_eval->add_option("--out", out_path, "output file (default stdout)");

  auto* c_trop = add_sub("tropical", "evaluate the tropical distance series once");
  c_trop->add_option("--domain", domain_spec);
  c_trop->add_option("--moduli", moduli_str, "lattice coordinates 'x,y,theta'")->required();
  c_trop->add_option("--point", point_str, "evaluation point 'px,py'")->required();
  c_trop->add_option("--out", out_path);

  auto* c_field = add_sub("field", "evaluate the distance field on a grid");
  c_field->add_option("--domain", domain_spec);
  c_field->add_option("--h", h);
  c_field->add_option("--bbox", bbox_str, "'xmin,xmax,ymin,ymax' (default: domain box)");
  c_field->add_option("--grid", grid_str, "'NXxNY'");
  c_field->add_option("--samples", samples);
  c_field->add_option("--seed", seed);
  c_field->add_option("--threads", threads);
  c_field->add_option("--out", out_path, "output CSV")->required();

  auto* c_levels = add_sub("levels", "extract level curves from a field CSV");
  c_levels->add_option("--field", field_path, "field CSV produced by 'field'")->required();
  c_levels->add_option("--levels", levels_str, "comma-separated level values")->required();
  c_levels->add_option("--out", out_path, "levels JSON")->required();
  c_levels->add_option("--svg", svg_path, "optional SVG contour plot");

  auto* c_exp = add_sub("experiment", "run a named study and write its report");
  std::string exp_name;
  c_exp->add_option("name", exp_name, "disk-check | quadrant-check | hyperbola | ellipse-probe | invariance")
      ->required();
  c_exp->add_option("--domain", domain_spec);
  c_exp->add_option("--h", h);
  c_exp->add_option("--samples", samples);
  c_exp->add_option("--seed", seed);
  c_exp->add_option("--grid", grid_str);
  c_exp->add_option("--bbox", bbox_str);
  c_exp->add_option("--levels", levels_str, "explicit level values (hyperbola)");
  c_exp->add_option("--nlevels", n_levels, "level count (ellipse-probe)");
  c_exp->add_option("--cases", cases, "case count (invariance)");
  c_exp->add_option("--anchor", anchor_str, "anchor point 'x,y' (hyperbola)");
  c_exp->add_flag("--quick", quick, "small CI tier");
  c_exp->add_option("--threads", threads);
  c_exp->add_option("--out", out_path, "report JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_eval) {
      ConvexDomain dom = parse_domain(domain_spec);
      Vec2 p = parse_pair(point_str, "--point");
      EstimatorOptions opt;
      opt.h = h;
      opt.literal_def = literal_def;
      opt.workers = threads;
      Estimate est;
      if (integrator == "mc") {
        est = estimate_mc(dom, p, h, samples, seed, opt);
      } else if (integrator == "quad") {
        std::vector<double> g = parse_list(quad_grid);
        if (g.size() != 3) throw ParseError("--quad-grid must be 'nx,ny,ntheta'");
        est = estimate_quadrature(dom, p, h, ymax, static_cast<int>(g[0]), static_cast<int>(g[1]),
                                  static_cast<int>(g[2]), opt);
      } else {
        throw ParseError("--integrator must be mc or quad");
      }
      Json j = Json::object();
      j["schema"] = 1;
      j["value"] = est.value;
      j["stderr"] = est.stderr_or_bound;
      j["n"] = est.n;
      j["method"] = method_name(est.method);
      j["flagged"] = est.flagged;
      emit(j.dump(), out_path);
      return 0;
    }

    if (*c_trop) {
      ConvexDomain dom = parse_domain(domain_spec);
      Vec2 p = parse_pair(point_str, "--point");
      std::vector<double> m = parse_list(moduli_str);
      if (m.size() != 3) throw ParseError("--moduli must be 'x,y,theta'");
      ModuliPoint mp{m[0], m[1], m[2]};
      TropicalValue tv = eval_tropical(dom, lattice_at(mp), p);
      Json j = Json::object();
      j["schema"] = 1;
      j["value"] = tv.value;
      Json argmin = Json::array();
      argmin.push_back(tv.argmin.m);
      argmin.push_back(tv.argmin.n);
      j["argmin"] = std::move(argmin);
      j["certified_radius"] = tv.certified_radius;
      emit(j.dump(), out_path);
      return 0;
    }

    if (*c_field) {
      ConvexDomain dom = parse_domain(domain_spec);
      BBox bb = bbox_str.empty() ? default_bbox(dom) : parse_bbox(bbox_str);
      auto [gnx, gny] = parse_grid(grid_str);
      EstimatorOptions opt;
      opt.h = h;
      opt.workers = threads;
      ScalarField f = field(dom, h, bb, gnx, gny, samples, seed, opt);
      emit(field_to_csv(f), out_path);
      return 0;
    }

    if (*c_levels) {
      std::ifstream in(field_path);
      if (!in) throw ParseError("cannot open field CSV: " + field_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      ScalarField f = parse_field_csv(ss.str());
      std::vector<double> levels = parse_list(levels_str);
      Json root = Json::object();
      root["schema"] = 1;
      Json jlevels = Json::array();
      std::vector<std::pair<double, std::vector<Contour>>> svg_levels;
      for (double t : levels) {
        std::vector<Contour> cs = marching_squares(f, t);
        Json jl = Json::object();
        jl["level"] = t;
        Json jcs = Json::array();
        for (const Contour& c : cs) jcs.push_back(contour_to_json(c));
        jl["contours"] = std::move(jcs);

        // metrics of the largest closed contour at this level
        const Contour* main = nullptr;
        double main_area = 0.0;
        for (const Contour& c : cs) {
          if (!c.closed) continue;
          double area = contour_area_centroid(c).first;
          if (!main || area > main_area) {
            main = &c;
            main_area = area;
          }
        }
        Json jm = Json::object();
        if (main) {
          ContourMetrics met = compute_contour_metrics(*main, MahlerMode::Centroid, 0.02);
          jm["area"] = met.area;
          Json jc = Json::array();
          jc.push_back(met.centroid.x);
          jc.push_back(met.centroid.y);
          jm["centroid"] = std::move(jc);
          jm["mahler"] = met.mahler;  // null when convexity fails
          if (std::isnan(met.conic_residual)) {
            jm["conic_class"] = Json();
            jm["conic_residual"] = Json();
          } else {
            jm["conic_class"] = conic_class_name(met.conic_class);
            jm["conic_residual"] = met.conic_residual;
          }
        } else {
          jm["area"] = Json();
          jm["centroid"] = Json();
          jm["mahler"] = Json();
          jm["conic_class"] = Json();
          jm["conic_residual"] = Json();
        }
        jl["metrics"] = std::move(jm);
        jlevels.push_back(std::move(jl));
        svg_levels.emplace_back(t, std::move(cs));
      }
      root["levels"] = std::move(jlevels);
      emit(root.dump(), out_path);
      if (!svg_path.empty())
        write_text_file(svg_path, contours_to_svg(svg_levels, f.xmin, f.xmax, f.ymin, f.ymax));
      return 0;
    }

    if (*c_exp) {
      Report rep;
      if (exp_name == "disk-check") {
        DiskCheckParams p;
        p.n = c_exp->count("--samples") ? samples : (quick ? 100000 : 1000000);
        p.seed = c_exp->count("--seed") ? seed : 42;
        p.workers = threads;
        rep = disk_center_check(p);
      } else if (exp_name == "quadrant-check") {
        QuadrantCheckParams p;
        p.h = h;
        p.n = c_exp->count("--samples") ? samples : (quick ? 50000 : 200000);
        p.seed = c_exp->count("--seed") ? seed : 7;
        p.workers = threads;
        rep = quadrant_check(p);
      } else if (exp_name == "hyperbola") {
        HyperbolaParams p;
        if (c_exp->count("--domain")) p.domain = parse_domain(domain_spec);
        p.h = h;
        if (!levels_str.empty()) p.levels = parse_list(levels_str);
        if (!bbox_str.empty()) p.bbox = parse_bbox(bbox_str);
        if (c_exp->count("--grid")) {
          auto [gnx, gny] = parse_grid(grid_str);
          p.nx = gnx;
          p.ny = gny;
        } else if (quick) {
          p.nx = p.ny = 101;
        }
        p.n = c_exp->count("--samples") ? samples : (quick ? 6000 : 10000);
        if (c_exp->count("--seed")) p.seed = seed;
        if (!anchor_str.empty()) p.anchor = parse_pair(anchor_str, "--anchor");
        p.workers = threads;
        rep = hyperbola_convergence(p);
      } else if (exp_name == "ellipse-probe") {
        EllipseProbeParams p;
        if (c_exp->count("--domain")) {
          p.domain = parse_domain(domain_spec);
          p.bbox = default_bbox(p.domain);
        }
        if (!bbox_str.empty()) p.bbox = parse_bbox(bbox_str);
        p.h = h;
        p.n_levels = n_levels;
        if (c_exp->count("--grid")) {
          auto [gnx, gny] = parse_grid(grid_str);
          p.nx = gnx;
          p.ny = gny;
        } else if (quick) {
          p.nx = p.ny = 101;
        }
        p.n = c_exp->count("--samples") ? samples : (quick ? 10000 : 20000);
        if (c_exp->count("--seed")) p.seed = seed;
        p.workers = threads;
        rep = ellipse_limit_probe(p);
      } else if (exp_name == "invariance") {
        InvarianceParams p;
        p.n_cases = quick ? std::min(cases, 40) : cases;
        if (c_exp->count("--seed")) p.seed = seed;
        p.workers = threads;
        rep = invariance_suite(p);
      } else {
        throw ParseError("unknown experiment: " + exp_name);
      }
      emit(rep.to_json().dump(), out_path);
      return 0;
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
