#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wlg/boundary.hpp"
#include "wlg/grid.hpp"
#include "wlg/stencil.hpp"
#include "wlg/tv_solver.hpp"
#include "wlg/weight.hpp"

namespace wlg {

// Parsed experiment description. The on-disk format is JSON; see the README
// for the schema. Named analytic forms resolve through the registries below;
// unknown names raise ConfigError echoing the name.
struct ExperimentConfig {
  int schema_version = 1;

  // domain
  std::string shape_name;                 // disk | rect | annulus | two_disks | ball | box | pgm
  std::map<std::string, double> shape_params;
  std::string shape_pgm_path;
  double h = 1.0 / 32.0;
  int collar_width = 4;

  // weight
  std::string weight_name = "const";      // const | one_plus_r2 | boundary_dist
  std::map<std::string, double> weight_params;

  // boundary data
  std::string boundary_name = "const";    // const | cos_theta | coord | csv
  std::map<std::string, double> boundary_params;
  std::string boundary_csv_path;

  int stencil_neighbors = 16;
  int levels = 64;

  PdParams solver;
  bool run_tv_cross_check = true;

  std::vector<std::string> checks;        // empty = all
  std::map<std::string, double> tolerances;

  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  double tol(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::string& base_dir);

// Registry-backed builders; throw ConfigError for unknown names.
DiscreteDomain build_domain_from_config(const ExperimentConfig& cfg);
WeightField build_weight_from_config(const ExperimentConfig& cfg,
                                     const DiscreteDomain& dom);
BoundaryData build_boundary_from_config(const ExperimentConfig& cfg,
                                        const DiscreteDomain& dom);

std::string config_hash(const ExperimentConfig& cfg);  // stable digest

}  // namespace wlg
