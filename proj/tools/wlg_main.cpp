#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wlg/experiment.hpp"
#include "wlg/io.hpp"
#include "wlg/set_minimizer.hpp"

namespace {

void apply_overrides(wlg::ExperimentConfig& cfg, const std::string& out,
                     std::uint64_t seed, bool seed_set, int threads) {
  if (!out.empty()) cfg.output_dir = out;
  if (const char* env = std::getenv("WLG_OUT_DIR"))
    if (env[0]) cfg.output_dir = env;
  if (seed_set) cfg.seed = seed;
  if (threads > 0) cfg.threads = threads;
}

void print_report(const wlg::RunReport& rep) {
  for (const auto& c : rep.checks) {
    std::printf("%-7s %-28s value=%.6g tol=%.6g%s%s\n", c.status.c_str(),
                c.name.c_str(), c.value, c.tolerance,
                c.witness.empty() ? "" : "  ", c.witness.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted least gradient construction and verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir, field_path, check_filter;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  double level = 0.0;
  bool level_set = false;
  std::string dump_path = "cut.dimacs";

  auto* run = app.add_subcommand("run", "run the configured pipeline");
  run->add_option("config", config_path, "config JSON path")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--threads", threads, "worker hint (runs are sequential)");
  run->add_option("--check-filter", check_filter, "run only this check");

  auto* verify = app.add_subcommand("verify", "run checkers on an emitted field");
  verify->add_option("field", field_path, "field CSV path")->required();
  verify->add_option("config", config_path, "config JSON path")->required();
  verify->add_option("--check-filter", check_filter, "run only this check");

  auto* dump = app.add_subcommand("dump-cut", "emit a cut problem in DIMACS format");
  dump->add_option("config", config_path, "config JSON path")->required();
  dump->add_option("--level", level, "level t for the exterior constraint")
      ->each([&](const std::string&) { level_set = true; });
  dump->add_option("--out", dump_path, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    wlg::ExperimentConfig cfg = wlg::load_config(config_path);
    apply_overrides(cfg, out_dir, seed, seed_set, threads);
    if (!check_filter.empty()) cfg.checks = {check_filter};

    if (run->parsed()) {
      wlg::RunReport rep = wlg::run_experiment(cfg);
      print_report(rep);
      std::printf("report: %s/report.json\n", cfg.output_dir.c_str());
      return rep.all_passed() ? 0 : 1;
    }
    if (verify->parsed()) {
      wlg::RunReport rep = wlg::verify_field(cfg, field_path);
      print_report(rep);
      return rep.all_passed() ? 0 : 1;
    }
    if (dump->parsed()) {
      wlg::DiscreteDomain dom = wlg::build_domain_from_config(cfg);
      wlg::WeightField w = wlg::build_weight_from_config(cfg, dom);
      wlg::BoundaryData bd = wlg::build_boundary_from_config(cfg, dom);
      wlg::CutStencil st = wlg::make_stencil(dom.grid.dim, cfg.stencil_neighbors);
      double t = level_set ? level : 0.5 * (bd.min_value + bd.max_value);
      wlg::IndicatorSet L = wlg::superlevel_exterior(dom, bd, t);
      wlg::CutProblem cp = wlg::build_cut_problem(dom, w, st, L);
      std::ofstream os(dump_path);
      if (!os) throw wlg::IoError("cannot write " + dump_path);
      wlg::dump_dimacs(cp, os);
      std::printf("wrote %s (level t=%.17g)\n", dump_path.c_str(), t);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
