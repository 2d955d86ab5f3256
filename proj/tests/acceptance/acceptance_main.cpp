// Acceptance suite: one criterion per block, one PASS/FAIL line each, exit
// code 0 only if every criterion holds. Runs the library in-process and the
// CLI binary (EQUIDIST_CLI_PATH) for the end-to-end determinism check.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "equidist/conic_fit.hpp"
#include "equidist/contour_metrics.hpp"
#include "equidist/contours.hpp"
#include "equidist/convex_domain.hpp"
#include "equidist/estimator.hpp"
#include "equidist/experiments.hpp"
#include "equidist/io.hpp"
#include "equidist/moduli.hpp"
#include "equidist/tropical.hpp"

using namespace equidist;

namespace {

int failures = 0;

void report(int criterion, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, title,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

// golden regression values frozen from the first accepted run
constexpr double kGoldenDiskPipeline = 0.6825310618366137;  // n=1e6, seed 42
constexpr double kGoldenQuadrantC1 = 1.6135445583007846;    // n=2e5, seed 7

ConvexDomain random_bounded_domain(std::mt19937_64& rng, int k) {
  if (k % 4 == 2) return ConvexDomain::square();
  if (k % 4 == 3) return ConvexDomain::disk();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (k % 4 == 0) {
    for (;;) {
      int npts = 4 + static_cast<int>(rng() % 5);
      std::vector<Vec2> pts;
      for (int i = 0; i < npts; ++i) pts.push_back({-1.5 + 3.0 * u(rng), -1.5 + 3.0 * u(rng)});
      std::vector<Vec2> hull = convex_hull(pts);
      if (hull.size() < 3) continue;
      try {
        return ConvexDomain::polygon(hull);
      } catch (const InvalidDomain&) {
      }
    }
  }
  double w = -1.0 + 2.0 * u(rng);
  double phi = M_PI * u(rng);
  double s = 0.6 + 1.2 * u(rng);
  Mat2 rot = Mat2::rotation(phi);
  Mat2 d = Mat2::diag(std::exp(w), std::exp(-w));
  Mat2 m = rot * d * rot.transpose() * (1.0 / (s * s));
  return ConvexDomain::ellipse({-0.5 + u(rng), -0.5 + u(rng)}, m.a11, 0.5 * (m.a12 + m.a21),
                               m.a22);
}

bool try_interior_point(const ConvexDomain& d, std::mt19937_64& rng, double min_dist, Vec2& out) {
  double xmin = -d.support({-1, 0}), xmax = d.support({1, 0});
  double ymin = -d.support({0, -1}), ymax = d.support({0, 1});
  std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
  for (int k = 0; k < 400; ++k) {  // sliver domains may admit no such point
    Vec2 p{ux(rng), uy(rng)};
    if (d.contains(p) == Containment::Interior && d.boundary_distance(p) >= min_dist) {
      out = p;
      return true;
    }
  }
  return false;
}

std::string run_cli(const std::string& args, const std::string& out_file) {
  std::string cmd = std::string(EQUIDIST_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (rc != 0) return "<exit " + std::to_string(rc) + ">" + ss.str();
  return ss.str();
}

// --- criteria ---------------------------------------------------------------

void criterion_1_disk_value() {
  DiskCheckParams prm;
  prm.n = 1000000;
  prm.seed = 42;
  prm.workers = 1;  // the runtime bound is single-threaded
  auto t0 = std::chrono::steady_clock::now();
  Report rep = disk_center_check(prm);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Table* t = rep.table("values");
  double a = t->rows[0][0], b = t->rows[0][1], c = t->rows[0][2], se = t->rows[0][3];
  bool pass = rep.all_pass() && secs <= 300.0 && std::abs(c - kGoldenDiskPipeline) <= 1e-9;
  report(1, "disk-centre value against the reference and both oracles", pass,
         fmt("pipeline=%.6f+-%.6f closed-form=%.6f direct-2d=%.6f |c-a|=%.2e |c-b|=%.2e "
             "(3se=%.2e) runtime=%.1fs",
             c, se, a, b, std::abs(c - a), std::abs(c - b), 3.0 * se, secs));
}

void criterion_2_shortest_identity() {
  ModuliSampler sampler(2025);
  ConvexDomain disk = ConvexDomain::disk();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Lattice lat = lattice_at(sampler.sample(static_cast<std::uint64_t>(i)));
    double v = eval_tropical(disk, lat, {0, 0}).value;
    worst = std::max(worst, std::abs(v - norm(lat.shortest_vector().ambient)));
  }
  report(2, "disk-centre value equals the shortest vector length", worst <= 1e-10,
         fmt("max |F(0) - |shortest|| = %.2e over 1000 lattices (tol 1e-10)", worst));
}

void criterion_3_zero_level() {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Lattice z2({1, 0}, {0, 1});
  ConvexDomain sq = ConvexDomain::square();
  ConvexDomain disk = ConvexDomain::disk();
  double worst_boundary = 0.0;
  for (int i = 0; i < 100; ++i) {
    double t = 4.0 * u(rng);
    int side = static_cast<int>(t);
    double f = t - side;
    Vec2 bp;
    switch (side) {
      case 0: bp = {2.0 * f - 1.0, -1.0}; break;
      case 1: bp = {1.0, 2.0 * f - 1.0}; break;
      case 2: bp = {1.0 - 2.0 * f, 1.0}; break;
      default: bp = {-1.0, 1.0 - 2.0 * f}; break;
    }
    worst_boundary = std::max(worst_boundary, eval_tropical(sq, z2, bp).value);
    double phi = 2.0 * M_PI * u(rng);
    worst_boundary =
        std::max(worst_boundary, eval_tropical(disk, z2, {std::cos(phi), std::sin(phi)}).value);
  }
  ModuliSampler sampler(34);
  double worst_margin = kInf;
  int tested = 0;
  for (int i = 0; tested < 100; ++i) {
    Lattice lat = lattice_at(sampler.sample(static_cast<std::uint64_t>(i)));
    double s = norm(lat.shortest_vector().ambient);
    Vec2 p{-0.85 + 1.7 * u(rng), -0.85 + 1.7 * u(rng)};
    double d = sq.boundary_distance(p);
    if (d < 0.1) continue;
    ++tested;
    double v = eval_tropical(sq, lat, p).value;
    worst_margin = std::min(worst_margin, v - (0.1 * s - 1e-9));
  }
  bool pass = worst_boundary <= 1e-9 && worst_margin >= 0.0;
  report(3, "zero level is exactly the boundary", pass,
         fmt("max boundary value %.2e (tol 1e-9); min interior margin %.2e", worst_boundary,
             worst_margin));
}

void criterion_4_enumeration_oracle() {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    ConvexDomain dom = random_bounded_domain(rng, k);
    Vec2 p;
    while (!try_interior_point(dom, rng, 0.05, p)) dom = random_bounded_domain(rng, k);
    ModuliPoint mp{-0.5 + u(rng), 1.0 + 3.0 * u(rng), u(rng) * M_PI};
    Lattice lat = lattice_at(mp);
    double mine = eval_tropical(dom, lat, p).value;
    double naive = kInf;
    for (int m = -200; m <= 200; ++m)
      for (int n = -200; n <= 200; ++n) {
        if (m == 0 && n == 0) continue;
        Vec2 v = lat.b1() * static_cast<double>(m) + lat.b2() * static_cast<double>(n);
        double c = dom.tropical_coefficient(v);
        if (std::isfinite(c)) naive = std::min(naive, c + dot(v, p));
      }
    worst = std::max(worst, std::abs(mine - naive));
  }
  report(4, "certified evaluation matches naive enumeration", worst <= 1e-9,
         fmt("max |eval - naive(box 200)| = %.2e over 1000 cases (tol 1e-9)", worst));
}

void criterion_5_symmetry_laws() {
  InvarianceParams prm;
  prm.n_cases = 100;
  prm.seed = 3;
  prm.n_exact = 400;
  prm.n_stat = 2000;
  prm.workers = 1;
  Report rep = invariance_suite(prm);
  const Verdict* sc = rep.find("exact_scaling_identity");
  const Verdict* eq = rep.find("exact_equivariance_identity");
  const Verdict* st = rep.find("statistical_invariance_3sigma");
  bool pass = sc->pass && eq->pass && st->pass;
  report(5, "exact and statistical symmetry laws", pass,
         fmt("scaling err %.2e (tol 1e-12); equivariance err %.2e (tol 1e-9); 3-sigma misses "
             "%.0f/100 (allow 3)",
             sc->measured, eq->measured, st->measured));
}

void criterion_6_quadrant_law() {
  QuadrantCheckParams prm;
  prm.h = 1.0;
  prm.n = 200000;
  prm.seed = 7;
  prm.workers = 1;
  Report rep = quadrant_check(prm);
  const Verdict* cons = rep.find("c_hat_consistent_across_points");
  const Verdict* hom = rep.find("homogeneity_shared_samples_exact");
  const Verdict* swap = rep.find("swap_symmetry_exact");
  double c1 = rep.table("points")->rows[0][4];
  bool golden_ok = std::abs(c1 - kGoldenQuadrantC1) <= 1e-9;
  bool pass = cons->pass && hom->pass && swap->pass && golden_ok;
  report(6, "quadrant law A(x,y) = c sqrt(xy)", pass,
         fmt("max pairwise dev %.4f (tol %.4f); c1=%.9f golden drift %.2e", cons->measured,
             cons->tolerance, c1, std::abs(c1 - kGoldenQuadrantC1)));
}

void criterion_7_hyperbola_trend() {
  HyperbolaParams prm;  // truncated quadrant, auto levels spanning factor 4
  prm.nx = prm.ny = 121;
  prm.n = 30000;
  prm.seed = 11;
  prm.workers = 1;
  Report rep = hyperbola_convergence(prm);
  const Table* t = rep.table("levels");
  double span = t->rows.back()[0] / t->rows.front()[0];
  const Verdict* mono = rep.find("deviation_nonincreasing_within_noise");
  const Verdict* fin = rep.find("final_deviation_small");
  bool pass = rep.all_pass() && span >= 4.0 - 1e-9;
  std::string devs;
  for (const auto& row : t->rows) devs += fmt("%.3f ", row[2]);
  report(7, "level sets of the truncated quadrant approach hyperbolas", pass,
         fmt("deviations [%s], final %.4f (tol 0.05), level span %.2fx, monotone=%s", devs.c_str(),
             fin->measured, span, mono->pass ? "yes" : "no"));
}

void criterion_8_ellipse_probe() {
  EllipseProbeParams prm;  // the square at h = 1
  prm.nx = prm.ny = 141;
  prm.n = 20000;
  prm.seed = 5;
  prm.workers = 1;
  Report rep = ellipse_limit_probe(prm);
  const Verdict* closed = rep.find("contours_closed_around_max");
  const Verdict* convex = rep.find("contours_convex_within_tolerance");
  const Verdict* bound = rep.find("mahler_below_blaschke_santalo");
  const Verdict* mono = rep.find("mahler_nondecreasing_within_noise");
  const Verdict* top = rep.find("top_levels_fit_ellipse");
  bool pass = closed->pass && convex->pass && bound->pass && mono->pass && top->pass;
  const Table* t = rep.table("levels");
  std::string ms;
  for (const auto& row : t->rows) ms += fmt("%.3f ", row[3]);
  report(8, "square level sets: rising Mahler toward pi^2, ellipse fits", pass,
         fmt("mahler [%s] max %.4f (bound %.4f), top levels ellipse=%s", ms.c_str(),
             bound->measured, bound->tolerance, top->pass ? "yes" : "no"));
}

void criterion_9_cusp_tail_bound() {
  ConvexDomain disk = ConvexDomain::disk();
  EstimatorOptions opt;
  opt.workers = 1;
  Estimate q10 = estimate_quadrature(disk, {0, 0}, 1.0, 10.0, 48, 64, 8, opt);
  Estimate q1e4 = estimate_quadrature(disk, {0, 0}, 1.0, 1e4, 48, 96, 8, opt);
  double diff = std::abs(q1e4.value - q10.value);
  double bound = tail_bound(1.0, 1.0, 10.0);
  report(9, "cusp truncation differences obey the tail bound", diff <= bound,
         fmt("|Q(ymax=1e4) - Q(ymax=10)| = %.6f <= bound %.6f", diff, bound));
}

void criterion_10_mahler_sanity() {
  Contour sq;
  sq.closed = true;
  sq.points = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  double m_sq = mahler(sq);

  Contour gon;
  gon.closed = true;
  for (int i = 0; i < 256; ++i) {
    double t = 2.0 * M_PI * i / 256;
    gon.points.push_back({std::cos(t), std::sin(t)});
  }
  double m_gon = mahler(gon);

  Contour tri;
  tri.closed = true;
  tri.points = {{1, 0}, {0, 1}, {-1, -1}};
  double m_tri_c = mahler(tri, MahlerMode::Centroid);
  double m_tri_s = mahler(tri, MahlerMode::Santalo);

  bool pass = std::abs(m_sq - 8.0) <= 1e-12 * 8.0 && std::abs(m_gon - M_PI * M_PI) <= 0.01 &&
              std::abs(m_tri_c - 6.75) <= 1e-6 && std::abs(m_tri_s - 6.75) <= 1e-6;
  report(10, "Mahler sanity: square 8, 256-gon pi^2, triangle 27/4", pass,
         fmt("square=%.12f 256-gon=%.6f (pi^2=%.6f) triangle=%.8f/%.8f", m_sq, m_gon, M_PI * M_PI,
             m_tri_c, m_tri_s));
}

void criterion_11_determinism() {
  // in-process: worker count must not change a single bit
  EstimatorOptions w1, w4;
  w1.workers = 1;
  w4.workers = 4;
  Estimate e1 = estimate_mc(ConvexDomain::disk(), {0.2, 0.1}, 1.0, 20000, 99, w1);
  Estimate e4 = estimate_mc(ConvexDomain::disk(), {0.2, 0.1}, 1.0, 20000, 99, w4);
  bool mem_ok = e1.value == e4.value && e1.stderr_or_bound == e4.stderr_or_bound;

  ScalarField f1 = field(ConvexDomain::square(), 1.0, {-1, 1, -1, 1}, 16, 16, 3000, 5, w1);
  ScalarField f4 = field(ConvexDomain::square(), 1.0, {-1, 1, -1, 1}, 16, 16, 3000, 5, w4);
  bool field_ok = field_to_csv(f1) == field_to_csv(f4);

  // end to end through the CLI
  std::string base =
      "eval --domain disk --point 0.1,0.2 --h 1 --samples 20000 --seed 7 --threads ";
  std::string o1 = run_cli(base + "1", "/tmp/equidist_acc_a.json");
  std::string o2 = run_cli(base + "4", "/tmp/equidist_acc_b.json");
  bool cli_ok = !o1.empty() && o1[0] != '<' && o1 == o2;

  std::string fargs = "field --domain square --h 1 --grid 12x12 --samples 2000 --seed 3 --threads ";
  std::string fo1 = run_cli(fargs + "1 --out /tmp/equidist_acc_f1.csv", "/tmp/equidist_acc_o1");
  std::string fo2 = run_cli(fargs + "2 --out /tmp/equidist_acc_f2.csv", "/tmp/equidist_acc_o2");
  (void)fo1;
  (void)fo2;
  std::ifstream fa("/tmp/equidist_acc_f1.csv", std::ios::binary);
  std::ifstream fb("/tmp/equidist_acc_f2.csv", std::ios::binary);
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  bool csv_ok = !sa.str().empty() && sa.str() == sb.str();

  bool pass = mem_ok && field_ok && cli_ok && csv_ok;
  report(11, "byte-identical outputs regardless of worker count", pass,
         fmt("estimate=%s field=%s cli-json=%s cli-csv=%s", mem_ok ? "ok" : "DIFF",
             field_ok ? "ok" : "DIFF", cli_ok ? "ok" : "DIFF", csv_ok ? "ok" : "DIFF"));
}

}  // namespace

int main() {
  std::printf("equidist acceptance suite\n");
  auto t0 = std::chrono::steady_clock::now();
  criterion_1_disk_value();
  criterion_2_shortest_identity();
  criterion_3_zero_level();
  criterion_4_enumeration_oracle();
  criterion_5_symmetry_laws();
  criterion_6_quadrant_law();
  criterion_7_hyperbola_trend();
  criterion_8_ellipse_probe();
  criterion_9_cusp_tail_bound();
  criterion_10_mahler_sanity();
  criterion_11_determinism();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d/11 criteria passed in %.1f s\n", 11 - failures, secs);
  return failures == 0 ? 0 : 1;
}
