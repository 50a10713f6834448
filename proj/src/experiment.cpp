#include "wlg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "json.hpp"
#include "wlg/io.hpp"

namespace wlg {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string cell_witness(const Grid& g, int cell) {
  if (cell < 0) return "";
  auto c = g.coords(cell);
  char buf[64];
  if (g.dim == 3)
    std::snprintf(buf, sizeof(buf), "cell(%d,%d,%d)", c[0], c[1], c[2]);
  else
    std::snprintf(buf, sizeof(buf), "cell(%d,%d)", c[0], c[1]);
  return buf;
}

struct CheckFilter {
  const std::vector<std::string>& names;
  bool enabled(const std::string& n) const {
    if (names.empty()) return true;
    for (auto& s : names)
      if (s == "all" || s == n) return true;
    return false;
  }
};

class Runner {
 public:
  Runner(RunReport& rep, const CheckFilter& filter)
      : rep_(rep), filter_(filter) {}

  template <typename Fn>
  void check(const std::string& name, const std::string& op,
             const std::string& property, Fn&& fn) {
    CheckResult r;
    r.name = name;
    r.op = op;
    r.property = property;
    if (!filter_.enabled(name)) {
      r.status = "skipped";
      rep_.checks.push_back(std::move(r));
      return;
    }
    try {
      fn(r);  // fn sets value/tolerance/witness and pass/fail via r.status
    } catch (const std::exception& e) {
      r.status = "fail";
      r.witness = e.what();
    }
    rep_.checks.push_back(std::move(r));
  }

 private:
  RunReport& rep_;
  const CheckFilter& filter_;
};

void set_status(CheckResult& r, bool pass) { r.status = pass ? "pass" : "fail"; }

// checks shared between `run` and `verify`
void field_checks(Runner& run, const ExperimentConfig& cfg,
                  const DiscreteDomain& dom, const WeightField& w,
                  const CutStencil& st, const BoundaryData& bd,
                  const std::vector<double>& levels, const ScalarField& u) {
  const Grid& g = dom.grid;
  double dt = levels.size() > 1 ? levels[1] - levels[0] : 0.0;
  double lip = boundary_modulus(dom, bd, 2.5 * g.h) / (2.5 * g.h);

  run.check("coarea_identity", "weighted_geometry.coarea_quadrature",
            "layer_cake_exactness", [&](CheckResult& r) {
              auto res = coarea_quadrature(u, interior_region(dom), w, st);
              r.value = std::abs(res.tv_value - res.coarea_value);
              r.tolerance = cfg.tol("coarea_abs", 1e-10);
              set_status(r, r.value <= r.tolerance);
              if (r.status == "fail")
                r.witness = "levels=" + std::to_string(res.levels_used);
            });

  run.check("boundary_trace", "level_set_construction.assemble_solution",
            "boundary_trace", [&](CheckResult& r) {
              double dev = 0.0;
              int worst = -1;
              for (int c : dom.boundary_cells) {
                double d = std::abs(u.v[c] - bd.g[c]);
                if (d > dev) {
                  dev = d;
                  worst = c;
                }
              }
              r.value = dev;
              r.tolerance = cfg.tol("boundary_trace", dt + 5.0 * lip * g.h);
              set_status(r, r.value <= r.tolerance);
              if (r.status == "fail") r.witness = cell_witness(g, worst);
            });

  run.check("components_reach_boundary",
            "level_set_construction.check_component_reaches_boundary",
            "boundary_attachment", [&](CheckResult& r) {
              int bad_level = -1;
              int witness = -1;
              for (size_t k = 0; k < levels.size(); ++k) {
                IndicatorSet E(g);
                for (int c = 0; c < g.ncells(); ++c)
                  E.v[c] = u.v[c] >= levels[k] ? 1 : 0;
                auto rep = check_component_reaches_boundary(E, dom);
                if (!rep.pass) {
                  bad_level = static_cast<int>(k);
                  witness = rep.witness_cell;
                  break;
                }
              }
              r.value = bad_level;
              r.tolerance = 0;
              set_status(r, bad_level < 0);
              if (r.status == "fail")
                r.witness = "level " + std::to_string(bad_level) + " " +
                            cell_witness(g, witness);
            });
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config_hash = config_hash(cfg);
  rep.version = kVersion;
  {
    auto now = std::chrono::system_clock::now();
    auto tt = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::gmtime(&tt));
    rep.timestamp = buf;
  }

  std::filesystem::create_directories(cfg.output_dir);
  CheckFilter filter{cfg.checks};
  Runner run(rep, filter);

  DiscreteDomain dom;
  WeightField w;
  BoundaryData bd;
  CutStencil st;
  bool built = false;
  run.check("domain_invariants", "domain_model.build_domain", "domain_structure",
            [&](CheckResult& r) {
              dom = build_domain_from_config(cfg);
              w = build_weight_from_config(cfg, dom);
              bd = build_boundary_from_config(cfg, dom);
              st = make_stencil(dom.grid.dim, cfg.stencil_neighbors);
              built = true;
              r.value = static_cast<double>(dom.interior_cells.size());
              r.tolerance = 0;
              r.status = "pass";
            });
  if (!built) {
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, (std::filesystem::path(cfg.output_dir) / "report.json").string());
    return rep;
  }
  const Grid& g = dom.grid;

  run.check("extension_trace", "domain_model.extend_boundary_data",
            "extension_continuity", [&](CheckResult& r) {
              // face-adjacent collar cells: the nearest boundary cell is then
              // within 2h of the adjacent one, so the deviation is bounded by
              // the modulus of continuity at 2h
              double omega = boundary_modulus(dom, bd, 2.0 * g.h);
              double dev = 0.0;
              int worst = -1;
              const int dirs2[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
              const int dirs3[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                       {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
              int ndirs = g.dim == 3 ? 6 : 4;
              auto dirs = g.dim == 3 ? &dirs3[0] : &dirs2[0];
              for (int q : dom.collar_cells) {
                auto c = g.coords(q);
                for (int k = 0; k < ndirs; ++k) {
                  int nb = g.shift(g.index(c[0], c[1], c[2]), dirs[k][0],
                                   dirs[k][1], dirs[k][2]);
                  if (nb < 0 || !dom.is_boundary(nb)) continue;
                  double d = std::abs(bd.G[q] - bd.g[nb]);
                  if (d > dev) {
                    dev = d;
                    worst = q;
                  }
                }
              }
              r.value = dev;
              r.tolerance = omega;
              set_status(r, dev <= omega + 1e-15);
              if (r.status == "fail") r.witness = cell_witness(g, worst);
            });

  // level-set construction
  LevelSetFamily fam;
  bool have_family = false;
  run.check("family_build", "level_set_construction.build_family",
            "family_construction", [&](CheckResult& r) {
              fam = build_family(dom, w, st, bd, cfg.levels);
              have_family = true;
              r.value = fam.num_levels();
              r.tolerance = 0;
              r.status = "pass";
            });

  ScalarField u_star;
  if (have_family) {
    run.check("exterior_monotonicity", "domain_model.superlevel_exterior",
              "layer_cake_monotonicity", [&](CheckResult& r) {
                bool ok = true;
                for (int k = 0; k + 1 < fam.num_levels() && ok; ++k) {
                  IndicatorSet hi = superlevel_exterior(dom, bd, fam.levels[k + 1]);
                  IndicatorSet lo = superlevel_exterior(dom, bd, fam.levels[k]);
                  ok = hi.subset_of(lo);
                }
                r.value = ok ? 0 : 1;
                r.tolerance = 0;
                set_status(r, ok);
              });

    run.check("nestedness", "set_minimizer.solve_star", "nestedness",
              [&](CheckResult& r) {
                int bad = -1;
                for (int k = 0; k + 1 < fam.num_levels(); ++k)
                  if (!fam.rep(k + 1).subset_of(fam.rep(k))) bad = k + 1;
                r.value = bad;
                r.tolerance = 0;
                set_status(r, bad < 0);
                if (bad >= 0) r.witness = "level " + std::to_string(bad);
              });

    run.check("boundary_values", "level_set_construction.check_boundary_values",
              "level_boundary_consistency", [&](CheckResult& r) {
                double dt = fam.num_levels() > 1 ? fam.levels[1] - fam.levels[0] : 0.0;
                double lip = boundary_modulus(dom, bd, 2.5 * g.h) / (2.5 * g.h);
                double tol = cfg.tol("boundary_values", dt + 5.0 * lip * g.h);
                auto brep = check_boundary_values(fam, dom, bd, tol);
                r.value = brep.max_deviation;
                r.tolerance = tol;
                set_status(r, brep.pass);
                if (!brep.pass)
                  r.witness = "level " + std::to_string(brep.witness_level) + " " +
                              cell_witness(g, brep.witness_cell);
              });

    run.check("separation", "level_set_construction.check_separation",
              "strict_separation", [&](CheckResult& r) {
                auto plateaus = plateau_values(dom, bd);
                auto srep = check_separation(fam, dom, plateaus);
                r.value = srep.min_distance;
                r.tolerance = 0;
                set_status(r, srep.pass);
                if (!srep.pass)
                  r.witness = "levels " + std::to_string(srep.witness_s) + "," +
                              std::to_string(srep.witness_t) + " " +
                              cell_witness(g, srep.witness_cell);
                else if (srep.pairs_exempted > 0)
                  r.witness = std::to_string(srep.pairs_exempted) +
                              " plateau pairs exempted";
              });

    run.check("assemble", "level_set_construction.assemble_solution",
              "solution_assembly", [&](CheckResult& r) {
                u_star = assemble_solution(fam, dom, bd);
                r.value = 0;
                r.tolerance = 0;
                r.status = "pass";
              });

    if (!u_star.v.empty()) {
      run.check("superlevel_recovery", "level_set_construction.assemble_solution",
                "superlevel_recovery", [&](CheckResult& r) {
                  bool ok = superlevel_recovery_exact(fam, dom, u_star);
                  r.value = ok ? 0 : 1;
                  r.tolerance = 0;
                  set_status(r, ok);
                });

      field_checks(run, cfg, dom, w, st, bd, fam.levels, u_star);

      // analytic oracle for the disk with g = cos(theta), a constant: level
      // sets are vertical chords and the solution is the first coordinate
      bool chord_case = cfg.shape_name == "disk" &&
                        cfg.boundary_name == "cos_theta" &&
                        cfg.weight_name == "const";
      if (chord_case) {
        double cx = 0.0, cy = 0.0, R = cfg.shape_params.at("r");
        run.check("chord_hausdorff", "set_minimizer.solve_star",
                  "perimeter_minimality", [&](CheckResult& r) {
                    double worst = 0.0;
                    int worst_level = -1;
                    for (int k = 0; k < fam.num_levels(); ++k) {
                      double t = fam.levels[k];
                      double half = R * R - t * t;
                      half = half > 0 ? std::sqrt(half) : 0.0;
                      // interface cells inside Omega
                      std::vector<Point> iface;
                      for (int c : dom.interior_cells) {
                        bool edge = false;
                        auto cc = g.coords(c);
                        const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                        for (auto& d : d4) {
                          int nb = g.shift(g.index(cc[0], cc[1], cc[2]), d[0], d[1], 0);
                          if (nb >= 0 && fam.rep(k).v[nb] != fam.rep(k).v[c])
                            edge = true;
                        }
                        if (edge) iface.push_back(g.center(c));
                      }
                      if (half < 2 * g.h) continue;  // degenerate chord
                      double dH = 0.0;
                      for (auto& p : iface) {
                        double dx = std::abs(p[0] - (cx + t));
                        double dy = std::abs(p[1] - cy) > half
                                        ? std::abs(p[1] - cy) - half
                                        : 0.0;
                        dH = std::max(dH, std::hypot(dx, dy));
                      }
                      // chord sampled toward the interface
                      int samples = std::max(2, static_cast<int>(2 * half / g.h));
                      for (int s = 0; s <= samples && !iface.empty(); ++s) {
                        Point q{cx + t, cy - half + 2 * half * s / samples, 0.0};
                        double best = std::numeric_limits<double>::infinity();
                        for (auto& p : iface) best = std::min(best, norm(p - q));
                        dH = std::max(dH, best);
                      }
                      if (dH > worst) {
                        worst = dH;
                        worst_level = k;
                      }
                    }
                    r.value = worst;
                    r.tolerance = cfg.tol("chord_hausdorff_cells", 3.0) * g.h;
                    set_status(r, worst <= r.tolerance);
                    if (r.status == "fail")
                      r.witness = "level " + std::to_string(worst_level);
                  });

        run.check("sup_error", "level_set_construction.assemble_solution",
                  "solution_accuracy", [&](CheckResult& r) {
                    double worst = 0.0;
                    int worst_cell = -1;
                    for (int c : dom.interior_cells) {
                      double d = std::abs(u_star.v[c] - (g.center(c)[0] - cx));
                      if (d > worst) {
                        worst = d;
                        worst_cell = c;
                      }
                    }
                    double dt =
                        fam.num_levels() > 1 ? fam.levels[1] - fam.levels[0] : 0.0;
                    r.value = worst;
                    // level spacing plus a discretization term; equals 0.05 on
                    // the reference instance (h = 1/64, K = 64)
                    r.tolerance = cfg.tol("sup_error", dt + 1.2 * g.h);
                    set_status(r, worst <= r.tolerance);
                    if (r.status == "fail") r.witness = cell_witness(g, worst_cell);
                  });
      }

      // sampled structural properties
      Rng rng(cfg.seed);
      run.check("submodularity", "weighted_geometry.submodularity_defect",
                "submodular_inequality", [&](CheckResult& r) {
                  double worst = 0.0;
                  auto region = CellRegion::whole_box(g);
                  for (int trial = 0; trial < 50; ++trial) {
                    IndicatorSet E1(g), E2(g);
                    double t1 = rng.uniform(bd.min_value, bd.max_value);
                    double t2 = rng.uniform(bd.min_value, bd.max_value);
                    for (int c = 0; c < g.ncells(); ++c) {
                      E1.v[c] = u_star.v[c] >= t1 ? 1 : 0;
                      E2.v[c] = u_star.v[c] >= t2 ? 1 : 0;
                    }
                    // random rectangle perturbations make the pairs overlap
                    auto rect = [&](IndicatorSet& E) {
                      int x0 = static_cast<int>(rng.next_below(g.size[0]));
                      int y0 = static_cast<int>(rng.next_below(g.size[1]));
                      int wdt = 1 + static_cast<int>(rng.next_below(8));
                      int hgt = 1 + static_cast<int>(rng.next_below(8));
                      for (int y = y0; y < std::min(y0 + hgt, g.size[1]); ++y)
                        for (int x = x0; x < std::min(x0 + wdt, g.size[0]); ++x)
                          E.v[g.index(x, y, 0)] ^= 1;
                    };
                    if (g.dim == 2) {
                      rect(E1);
                      rect(E2);
                    }
                    worst = std::min(worst, submodularity_defect(E1, E2, region, w, st));
                  }
                  r.value = worst;
                  r.tolerance = cfg.tol("submodularity_min", -1e-12);
                  set_status(r, worst >= r.tolerance);
                });

      run.check("weak_duality", "weighted_geometry.dual_pairing_and_gap",
                "weak_duality", [&](CheckResult& r) {
                  double worst = -std::numeric_limits<double>::infinity();
                  for (int trial = 0; trial < 20; ++trial) {
                    DiscreteVectorField Y(g);
                    for (int c = 0; c < g.ncells(); ++c) {
                      double mag = rng.next_double() * w.cell[c];
                      double ang = rng.uniform(0, 2 * 3.14159265358979323846);
                      Y.at(c, 0) = mag * std::cos(ang);
                      Y.at(c, 1) = mag * std::sin(ang);
                    }
                    auto pr = dual_pairing_and_gap(u_star, Y, w);
                    double tv2 = pointwise_total_variation(u_star, w);
                    worst = std::max(worst, std::abs(pr.pairing) - tv2);
                    if (pr.feasibility_violation > 0)
                      throw Error("sampled dual field left the constraint set");
                  }
                  r.value = worst;
                  r.tolerance = cfg.tol("duality_abs", 1e-10);
                  set_status(r, worst <= r.tolerance);
                });
    }
  }

  // first-order cross-check
  if (cfg.run_tv_cross_check && have_family && !u_star.v.empty()) {
    PdSolution pd;
    bool solved = false;
    run.check("duality_gap", "tv_solver.solve_dirichlet_tv", "duality_gap",
              [&](CheckResult& r) {
                pd = solve_dirichlet_tv(dom, w, bd, cfg.solver);
                solved = true;
                r.value = pd.certificate.gap;
                r.tolerance = cfg.solver.gap_tol;
                set_status(r, pd.certificate.converged);
                if (!pd.certificate.converged)
                  r.witness = "iterations " + std::to_string(pd.certificate.iterations);

                nlohmann::ordered_json cj;
                cj["primal"] = pd.certificate.primal;
                cj["dual"] = pd.certificate.dual;
                cj["gap"] = pd.certificate.gap;
                cj["iterations"] = pd.certificate.iterations;
                cj["converged"] = pd.certificate.converged;
                write_text_file((std::filesystem::path(cfg.output_dir) /
                                 "certificate.json").string(),
                                cj.dump(2) + "\n");
              });
    if (solved) {
      run.check("cross_method_l1", "tv_solver.compare_solutions",
                "cross_method_agreement", [&](CheckResult& r) {
                  ScalarField snapped = snap_to_levels(pd.u, fam.levels);
                  auto d = compare_solutions(snapped, u_star, interior_region(dom));
                  double area = static_cast<double>(dom.interior_cells.size()) *
                                g.cell_volume();
                  r.value = d.l1 / area;
                  r.tolerance = cfg.tol("cross_l1", 1e-2);
                  set_status(r, r.value <= r.tolerance);
                  if (r.status == "fail") r.witness = cell_witness(g, d.argmax_cell);
                });

      run.check("superlevel_minimality", "weighted_geometry.alpha_perimeter",
                "superlevel_minimality", [&](CheckResult& r) {
                  double factor = cfg.tol("superlevel_factor", 1.05);
                  double worst = 0.0;
                  int worst_level = -1;
                  auto region = interior_region(dom);
                  for (int k = 0; k < fam.num_levels(); ++k) {
                    IndicatorSet S(g);
                    for (int c = 0; c < g.ncells(); ++c)
                      S.v[c] = pd.u.v[c] >= fam.levels[k] ? 1 : 0;
                    double ps = alpha_perimeter(S, region, w, st);
                    double pe = alpha_perimeter(fam.rep(k), region, w, st);
                    double excess = ps - factor * pe;
                    if (excess > worst) {
                      worst = excess;
                      worst_level = k;
                    }
                  }
                  r.value = worst;
                  r.tolerance = 1e-12;
                  set_status(r, worst <= r.tolerance);
                  if (r.status == "fail")
                    r.witness = "level " + std::to_string(worst_level);
                });

      emit_field(pd.u, (std::filesystem::path(cfg.output_dir) / "u_pd").string());
    }
  }

  // artifacts
  if (have_family && !u_star.v.empty()) {
    namespace fs = std::filesystem;
    emit_field(u_star, (fs::path(cfg.output_dir) / "u_star").string());
    std::string levels_csv = "k,t,perimeter,cells\n";
    for (int k = 0; k < fam.num_levels(); ++k) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%ld\n", k, fam.levels[k],
                    fam.pairs[k].value, fam.rep(k).count());
      levels_csv += buf;
      if (g.dim == 2) {
        char name[64];
        std::snprintf(name, sizeof(name), "level_%03d.pgm", k);
        write_mask_pgm(fam.rep(k), (fs::path(cfg.output_dir) / name).string());
      }
    }
    write_text_file((fs::path(cfg.output_dir) / "levels.csv").string(), levels_csv);
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_report(rep, (std::filesystem::path(cfg.output_dir) / "report.json").string());
  return rep;
}

RunReport verify_field(const ExperimentConfig& cfg, const std::string& field_csv) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config_hash = config_hash(cfg);
  rep.version = kVersion;
  rep.timestamp = "verify";

  CheckFilter filter{cfg.checks};
  Runner run(rep, filter);

  DiscreteDomain dom = build_domain_from_config(cfg);
  WeightField w = build_weight_from_config(cfg, dom);
  BoundaryData bd = build_boundary_from_config(cfg, dom);
  CutStencil st = make_stencil(dom.grid.dim, cfg.stencil_neighbors);
  ScalarField u = read_field_csv(dom.grid, field_csv);

  std::vector<double> levels;
  double a = bd.min_value, b = bd.max_value;
  if (a == b)
    levels = {a};
  else
    for (int k = 0; k <= cfg.levels; ++k)
      levels.push_back(a + (b - a) * (static_cast<double>(k) / cfg.levels));

  field_checks(run, cfg, dom, w, st, bd, levels, u);

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string report_to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["op"] = c.op;
    cj["property"] = c.property;
    cj["status"] = c.status;
    cj["value"] = c.value;
    cj["tolerance"] = c.tolerance;
    if (!c.witness.empty()) cj["witness"] = c.witness;
    j["checks"].push_back(cj);
  }
  j["provenance"]["config_hash"] = report.config_hash;
  j["provenance"]["version"] = report.version;
  j["timestamp"]["started"] = report.timestamp;
  j["timestamp"]["elapsed_s"] = report.elapsed_seconds;
  return j.dump(2) + "\n";
}

void emit_report(const RunReport& report, const std::string& path) {
  write_text_file(path, report_to_json(report));
}

}  // namespace wlg
