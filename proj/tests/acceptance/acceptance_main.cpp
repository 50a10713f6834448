// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <string>
#include <vector>

#include "wlg/conformal.hpp"
#include "wlg/experiment.hpp"
#include "wlg/io.hpp"
#include "wlg/level_set.hpp"
#include "wlg/mse.hpp"
#include "wlg/tv_solver.hpp"

using namespace wlg;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double cos_theta(const Point& p) {
  double r = std::hypot(p[0], p[1]);
  return r > 0 ? p[0] / r : 1.0;
}

struct Reference {
  DiscreteDomain dom;
  WeightField w;
  CutStencil st;
  BoundaryData bd;
  LevelSetFamily fam;
  ScalarField u_star;
  double build_seconds = 0.0;
};

// criterion 1 instance: unit disk, a = 1, g = cos theta, h = 1/64, K = 64
Reference build_reference() {
  Reference r;
  auto t0 = Clock::now();
  r.dom = build_domain(shape_disk(0, 0, 1.0), 1.0 / 64, 4);
  r.w = make_weight_constant(r.dom.grid, 1.0);
  r.st = make_stencil(2, 16);
  r.bd = extend_boundary_data(r.dom, cos_theta);
  r.fam = build_family(r.dom, r.w, r.st, r.bd, 64);
  r.u_star = assemble_solution(r.fam, r.dom, r.bd);
  r.build_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::vector<int> interface_cells(const Reference& r, const IndicatorSet& E) {
  std::vector<int> out;
  const Grid& g = r.dom.grid;
  for (int c : r.dom.interior_cells) {
    auto cc = g.coords(c);
    const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& d : d4) {
      int nb = g.shift(g.index(cc[0], cc[1], 0), d[0], d[1], 0);
      if (nb >= 0 && E.v[nb] != E.v[c]) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

void criterion_1(const Reference& r) {
  const Grid& g = r.dom.grid;
  double h = g.h;

  double sup = 0.0;
  for (int c : r.dom.interior_cells)
    sup = std::max(sup, std::abs(r.u_star.v[c] - g.center(c)[0]));

  double worst_hausdorff = 0.0;
  for (int k = 0; k < r.fam.num_levels(); ++k) {
    double t = r.fam.levels[k];
    double half2 = 1.0 - t * t;
    double half = half2 > 0 ? std::sqrt(half2) : 0.0;
    if (half < 2 * h) continue;  // degenerate chord at the extremes
    auto iface = interface_cells(r, r.fam.rep(k));
    double dH = 0.0;
    for (int c : iface) {
      Point p = g.center(c);
      double dx = std::abs(p[0] - t);
      double dy = std::abs(p[1]) > half ? std::abs(p[1]) - half : 0.0;
      dH = std::max(dH, std::hypot(dx, dy));
    }
    int samples = std::max(2, static_cast<int>(2 * half / h));
    for (int s = 0; s <= samples && !iface.empty(); ++s) {
      Point q{t, -half + 2 * half * s / samples, 0.0};
      double best = std::numeric_limits<double>::infinity();
      for (int c : iface) best = std::min(best, norm(g.center(c) - q));
      dH = std::max(dH, best);
    }
    worst_hausdorff = std::max(worst_hausdorff, dH);
  }

  // independent oracle at desk scale: the exhaustive enumeration agrees with
  // the cut solver on the coarsest disk that fits its precondition
  DiscreteDomain tiny = build_domain(shape_disk(0, 0, 1.0), 0.5, 3);
  WeightField tw = make_weight_constant(tiny.grid, 1.0);
  BoundaryData tbd = extend_boundary_data(tiny, cos_theta);
  IndicatorSet tL = superlevel_exterior(tiny, tbd, 0.0);
  MinimizerPair fast = solve_star(tiny, tw, r.st, tL);
  MinimizerPair slow = exhaustive_min(tiny, tw, r.st, tL);
  bool oracle_ok = fast.value_int == slow.value_int && fast.E_max == slow.E_max;

  bool pass = sup <= 0.05 && worst_hausdorff <= 3 * h &&
              r.build_seconds <= 60.0 && oracle_ok;
  report(1, "disk chord reconstruction", pass,
         fmt("sup|u-x1|=%.4f<=0.05, hausdorff=%.4f<=%.4f, %.1fs<=60s, "
             "coarse exhaustive %s",
             sup, worst_hausdorff, 3 * h, r.build_seconds,
             oracle_ok ? "match" : "MISMATCH"));
}

void criterion_2() {
  auto t0 = Clock::now();
  int mismatches = 0;
  int done = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(20000 + trial);
    int nx = 2 + static_cast<int>(rng.next_below(3));
    int ny = 2 + static_cast<int>(rng.next_below(3));
    if (nx * ny > 16) ny = 16 / nx;
    DiscreteDomain dom = build_domain(shape_rect(0, 0, nx, ny), 1.0, 3);
    CutStencil st = make_stencil(2, trial % 3 == 0 ? 4 : (trial % 3 == 1 ? 8 : 16));
    std::vector<double> samples(dom.grid.ncells());
    for (auto& s : samples) s = rng.uniform(1.0, 3.0);
    WeightField w = make_weight_samples(dom.grid, samples);
    IndicatorSet L(dom.grid);
    for (int q : dom.collar_cells) L.set(q, rng.next_bool());

    MinimizerPair fast = solve_star(dom, w, st, L);
    MinimizerPair slow = exhaustive_min(dom, w, st, L);
    if (fast.value_int != slow.value_int || !(fast.E_max == slow.E_max) ||
        !(fast.E_min == slow.E_min))
      ++mismatches;
    ++done;
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = mismatches == 0 && done == 200 && secs <= 30.0;
  report(2, "exact oracle equivalence", pass,
         fmt("%d/200 instances exact, %.1fs<=30s", done - mismatches, secs));
}

void criterion_3() {
  Grid g;
  g.dim = 2;
  g.h = 1.0 / 16;
  g.lo = {0, 0, 0};
  g.size = {16, 16, 1};
  auto region = CellRegion::whole_box(g);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(30000 + trial);
    CutStencil st = make_stencil(2, trial % 2 ? 16 : 8);
    std::vector<double> samples(g.ncells());
    for (auto& s : samples) s = rng.uniform(1.0, 3.0);
    WeightField w = make_weight_samples(g, samples);
    ScalarField u(g);
    for (auto& v : u.v) v = rng.uniform(-1, 1);
    auto res = coarea_quadrature(u, region, w, st);
    worst = std::max(worst, std::abs(res.tv_value - res.coarea_value));
  }
  report(3, "discrete coarea identity", worst <= 1e-10,
         fmt("max |tv - coarea| = %.3g <= 1e-10 over 100 fields", worst));
}

void criterion_4(const Reference& r) {
  bool nested = true;
  for (int k = 0; k + 1 < r.fam.num_levels(); ++k)
    if (!r.fam.rep(k + 1).subset_of(r.fam.rep(k))) nested = false;

  auto plateaus = plateau_values(r.dom, r.bd);
  auto sep = check_separation(r.fam, r.dom, plateaus);

  double dt = r.fam.levels[1] - r.fam.levels[0];
  double tol = dt + 5.0 * 1.0 * r.dom.grid.h;  // Lip(cos theta) = 1
  auto bv = check_boundary_values(r.fam, r.dom, r.bd, tol);

  bool pass = nested && sep.pass && bv.pass;
  report(4, "nestedness and separation", pass,
         fmt("nested=%s, disjoint boundaries=%s, max|g-t|=%.4f<=%.4f",
             nested ? "yes" : "NO", sep.pass ? "yes" : "NO", bv.max_deviation,
             tol));
}

struct Crit56 {
  bool pass5 = false, pass6 = false;
  std::string detail5, detail6;
};

Crit56 criteria_5_6(const Reference& r) {
  Crit56 out;
  PdParams params;
  params.max_iter = 20000;
  params.gap_tol = 1e-4;
  PdSolution sol = solve_dirichlet_tv(r.dom, r.w, r.bd, params);

  auto region = interior_region(r.dom);
  double worst_ratio = 0.0;
  bool pass5 = true;
  for (int k = 0; k < r.fam.num_levels(); ++k) {
    IndicatorSet S(r.dom.grid);
    for (int c = 0; c < r.dom.grid.ncells(); ++c)
      S.v[c] = sol.u.v[c] >= r.fam.levels[k] ? 1 : 0;
    double ps = alpha_perimeter(S, region, r.w, r.st);
    double pe = alpha_perimeter(r.fam.rep(k), region, r.w, r.st);
    if (ps > 1.05 * pe + 1e-12) pass5 = false;
    if (pe > 1e-12) worst_ratio = std::max(worst_ratio, ps / pe);
  }
  out.pass5 = pass5;
  out.detail5 = fmt("max P({u>=t},O)/P(E_t,O) = %.4f <= 1.05", worst_ratio);

  ScalarField snapped = snap_to_levels(sol.u, r.fam.levels);
  auto d = compare_solutions(snapped, r.u_star, interior_region(r.dom));
  double area =
      static_cast<double>(r.dom.interior_cells.size()) * r.dom.grid.cell_volume();
  double l1 = d.l1 / area;
  out.pass6 = sol.certificate.converged && sol.certificate.gap <= 1e-4 &&
              sol.certificate.iterations <= 20000 && l1 <= 1e-2;
  out.detail6 =
      fmt("gap=%.2g<=1e-4 in %d<=20000 iters, snapped L1/|O|=%.4f<=0.01",
          sol.certificate.gap, sol.certificate.iterations, l1);
  return out;
}

void criterion_7() {
  auto circle = conformal_mass(
      make_circle_polyline(0, 0, 0.5, 10000),
      [](const Point& p) { return 1.0 + p[0] * p[0] + p[1] * p[1]; }, 2.0);
  double target_c = 1.25 * 3.14159265358979323846;
  double ec1 = std::abs(circle.weighted_area - target_c);
  double ec2 = std::abs(circle.riemannian_area - target_c);

  auto sphere =
      conformal_mass_icosphere(1.0, 9, [](const Point&) { return 4.0; }, 1.0);
  double target_s = 16 * 3.14159265358979323846;
  double es1 = std::abs(sphere.weighted_area - target_s);
  double es2 = std::abs(sphere.riemannian_area - target_s);

  bool pass = ec1 <= 1e-6 && ec2 <= 1e-6 && es1 <= 1e-4 && es2 <= 1e-4;
  report(7, "conformal mass identity", pass,
         fmt("circle errs %.2g,%.2g<=1e-6; sphere errs %.2g,%.2g<=1e-4", ec1,
             ec2, es1, es2));
}

std::vector<double> first_integral(const std::function<double(double)>& a,
                                   double c, int nodes) {
  std::vector<double> u(nodes, 0.0);
  auto uprime = [&](double x) {
    double av = a(x);
    return c / std::sqrt(av * av - c * c);
  };
  double h = 1.0 / (nodes - 1);
  double acc = 0.0;
  int sub = 64;
  for (int i = 0; i + 1 < nodes; ++i) {
    for (int p = 0; p < sub; ++p) {
      double a0 = i * h + p * h / sub, b0 = a0 + h / sub;
      acc += (b0 - a0) / 6.0 *
             (uprime(a0) + 4 * uprime(0.5 * (a0 + b0)) + uprime(b0));
    }
    u[i + 1] = acc;
  }
  return u;
}

void criterion_8() {
  bool pass = true;
  std::string detail;

  // straight line with unit weight
  {
    PatchGeometry geo;
    geo.base_dim = 1;
    geo.n = {41, 1};
    geo.h = 1.0 / 40;
    geo.origin = {0, 0};
    auto res = solve_mse_dirichlet(geo, patch_weight_constant(1.0),
                                   [](const Point& x) { return x[0]; });
    double worst = 0.0;
    for (int i = 0; i < 41; ++i)
      worst = std::max(worst, std::abs(res.patch.u[i] - i * geo.h));
    pass = pass && res.converged && worst <= 1e-8;
    detail += fmt("line=%.2g<=1e-8", worst);

    auto co = homotopy_coefficients(res.patch, res.patch);
    auto cert = ellipticity_certificate(co, 1.0, co.K_observed);
    pass = pass && cert.pass && cert.margin >= -1e-10;
  }

  // weighted case against the first-integral oracle
  auto a_fn = [](double x) { return 2.0 + std::sin(x); };
  const int nodes = 401;
  std::vector<double> oracle = first_integral(a_fn, 1.0, nodes);
  PatchGeometry geo;
  geo.base_dim = 1;
  geo.n = {nodes, 1};
  geo.h = 1.0 / (nodes - 1);
  geo.origin = {0, 0};
  PatchWeight w =
      patch_weight_of_x([&](const Point& x) { return a_fn(x[0]); }, 2.0);
  {
    auto res = solve_mse_dirichlet(geo, w, [&](const Point& x) {
      return x[0] < 0.5 ? 0.0 : oracle.back();
    });
    double worst = 0.0;
    for (int i = 0; i < nodes; ++i)
      worst = std::max(worst, std::abs(res.patch.u[i] - oracle[i]));
    pass = pass && res.converged && worst <= 1e-6;
    detail += fmt(", oracle=%.2g<=1e-6", worst);

    auto co = homotopy_coefficients(res.patch, res.patch);
    auto cert = ellipticity_certificate(co, 2.0, co.K_observed);
    pass = pass && cert.pass && cert.margin >= -1e-10;
  }

  // Newton Jacobian vs finite differences on a generic 2D patch
  {
    PatchGeometry g2;
    g2.base_dim = 2;
    g2.n = {9, 8};
    g2.h = 0.1;
    g2.origin = {0, 0};
    PatchWeight w2;
    w2.a = [](const Point& x, double s) {
      return 1.5 + 0.3 * std::sin(x[0] + s) + 0.2 * x[1] * x[1];
    };
    w2.alpha = 0.5;
    GraphPatch p(g2, w2);
    Rng rng(88);
    for (auto& v : p.u) v = rng.uniform(-0.5, 0.5);
    std::vector<int> inodes;
    auto J = mse_jacobian_dense(p, &inodes);
    size_t n = inodes.size();
    double scale = 0.0;
    for (double v : J) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    const double eps = 1e-6;
    for (size_t col = 0; col < n; ++col) {
      GraphPatch pp = p, pm = p;
      pp.u[inodes[col]] += eps;
      pm.u[inodes[col]] -= eps;
      auto rp = mse_residual(pp), rm = mse_residual(pm);
      for (size_t row = 0; row < n; ++row) {
        double fd = (rp[inodes[row]] - rm[inodes[row]]) / (2 * eps);
        worst = std::max(worst, std::abs(fd - J[row * n + col]));
      }
    }
    pass = pass && worst / scale <= 1e-5;
    detail += fmt(", jac fd rel=%.2g<=1e-5", worst / scale);

    // ellipticity on the solved plane patch
    auto plane = solve_mse_dirichlet(
        g2, patch_weight_constant(1.0),
        [](const Point& x) { return x[0] + 2 * x[1]; });
    auto co = homotopy_coefficients(plane.patch, plane.patch);
    auto cert = ellipticity_certificate(co, 1.0, co.K_observed);
    pass = pass && plane.converged && cert.pass && cert.margin >= -1e-10;
    detail += fmt(", plane margin=%.2g>=0", cert.margin);
  }

  // comparison principle on ordered oracle pairs
  {
    GraphPatch sub_p(geo, w), sup_p(geo, w);
    sub_p.u = first_integral(a_fn, 0.8, nodes);
    sup_p.u = first_integral(a_fn, 1.2, nodes);
    sub_p = resolve_patch(sub_p).patch;
    sup_p = resolve_patch(sup_p).patch;
    auto rep = comparison_test(sup_p, sub_p);
    pass = pass && rep.pass && rep.ordered;
    detail += fmt(", comparison %s", rep.pass ? "pass" : "FAIL");
  }

  report(8, "inhomogeneous minimal surface machinery", pass, detail);
}

void criterion_9() {
  auto t0 = Clock::now();
  CutStencil st = make_stencil(2, 16);

  DiscreteDomain disk = build_domain(shape_disk(0, 0, 1.0), 1.0 / 64, 4);
  WeightField wd = make_weight_constant(disk.grid, 1.0);
  int disk_pass = 0;
  for (int j = 0; j < 16; ++j) {
    double th = 2.0 * 3.14159265358979323846 * j / 16;
    Point target{std::cos(th), std::sin(th), 0.0};
    int x0 = -1;
    double best = 1e9;
    for (int c : disk.boundary_cells) {
      double d = norm(disk.grid.center(c) - target);
      if (d < best) {
        best = d;
        x0 = c;
      }
    }
    if (barrier_check(disk, wd, st, x0, 0.3).pass) ++disk_pass;
  }

  DiscreteDomain sq = build_domain(shape_rect(0, 0, 1, 1), 1.0 / 64, 4);
  WeightField ws = make_weight_constant(sq.grid, 1.0);
  const double mids[4][2] = {{0.5, 0.0}, {0.5, 1.0}, {0.0, 0.5}, {1.0, 0.5}};
  int square_fail = 0;
  for (auto& m : mids) {
    Point target{m[0], m[1], 0.0};
    int x0 = -1;
    double best = 1e9;
    for (int c : sq.boundary_cells) {
      double d = norm(sq.grid.center(c) - target);
      if (d < best) {
        best = d;
        x0 = c;
      }
    }
    if (!barrier_check(sq, ws, st, x0, 0.3).pass) ++square_fail;
  }

  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = disk_pass == 16 && square_fail == 4 && secs <= 120.0;
  report(9, "barrier condition", pass,
         fmt("disk %d/16 pass, square %d/4 fail, %.1fs<=120s", disk_pass,
             square_fail, secs));
}

void criterion_10() {
  Grid g;
  g.dim = 2;
  g.h = 1.0 / 8;
  g.lo = {0, 0, 0};
  g.size = {12, 12, 1};
  auto region = CellRegion::whole_box(g);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng(100000 + trial);
    CutStencil st = make_stencil(2, trial % 2 ? 16 : 4);
    std::vector<double> samples(g.ncells());
    for (auto& s : samples) s = rng.uniform(1.0, 3.0);
    WeightField w = make_weight_samples(g, samples);
    IndicatorSet E1(g), E2(g);
    for (int c = 0; c < g.ncells(); ++c) {
      E1.v[c] = rng.next_bool();
      E2.v[c] = rng.next_bool();
    }
    worst = std::min(worst, submodularity_defect(E1, E2, region, w, st));
  }
  report(10, "submodularity", worst >= -1e-12,
         fmt("min defect = %.3g >= -1e-12 over 500 pairs", worst));
}

void criterion_11(const std::string& config_path) {
  namespace fs = std::filesystem;
  ExperimentConfig cfg = load_config(config_path);
  auto base = fs::temp_directory_path() / "wlg_acceptance";
  fs::create_directories(base);

  auto run_once = [&](const std::string& sub) {
    ExperimentConfig c = cfg;
    c.output_dir = (base / sub).string();
    RunReport rep = run_experiment(c);
    return std::make_pair(report_to_json(rep), rep.all_passed());
  };
  auto [j1, ok1] = run_once("run_a");
  auto [j2, ok2] = run_once("run_b");

  static const std::regex ts("\"timestamp\"[^}]*\\}");
  std::string s1 = std::regex_replace(j1, ts, "");
  std::string s2 = std::regex_replace(j2, ts, "");
  bool identical = s1 == s2;
  // artifacts are byte-identical as well
  bool artifacts_same = true;
  for (auto& e : fs::directory_iterator(base / "run_a")) {
    auto name = e.path().filename().string();
    if (name == "report.json") continue;  // holds the timestamp subtree
    if (read_text_file(e.path().string()) !=
        read_text_file(((base / "run_b") / name).string()))
      artifacts_same = false;
  }

  bool pass = identical && artifacts_same && ok1 && ok2;
  report(11, "determinism of the full pipeline", pass,
         fmt("reports %s modulo timestamp, artifacts %s, checks %s",
             identical ? "identical" : "DIFFER",
             artifacts_same ? "identical" : "DIFFER",
             ok1 && ok2 ? "all pass" : "FAILED"));
}

}  // namespace

int main(int argc, char** argv) {
  std::string config = argc > 1 ? argv[1] : "";
  if (config.empty()) {
    namespace fs = std::filesystem;
    for (const char* candidate :
         {WLG_ACCEPT_CONFIG, "configs/disk_cos.json", "../configs/disk_cos.json"}) {
      if (fs::exists(candidate)) {
        config = candidate;
        break;
      }
    }
  }

  Reference ref = build_reference();
  criterion_1(ref);
  criterion_2();
  criterion_3();
  criterion_4(ref);
  Crit56 c56 = criteria_5_6(ref);
  report(5, "superlevel near-minimality", c56.pass5, c56.detail5);
  report(6, "cross-method agreement", c56.pass6, c56.detail6);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (!config.empty())
    criterion_11(config);
  else
    report(11, "determinism of the full pipeline", false,
           "bundled config not found");

  std::printf("%s: %d criterion(s) failed\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
