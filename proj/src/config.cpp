#include "wlg/config.hpp"

#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "wlg/io.hpp"

namespace wlg {

namespace {

using nlohmann::json;

double param(const std::map<std::string, double>& m, const std::string& key,
             double fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

double require_param(const std::map<std::string, double>& m,
                     const std::string& key, const std::string& ctx) {
  auto it = m.find(key);
  if (it == m.end()) throw ConfigError(ctx + " requires parameter '" + key + "'");
  return it->second;
}

void read_params(const json& j, std::map<std::string, double>& out) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.value().is_number()) out[it.key()] = it.value().get<double>();
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.schema_version = j.value("schema_version", 1);

    const auto& dom = j.at("domain");
    cfg.shape_name = dom.at("shape").get<std::string>();
    read_params(dom, cfg.shape_params);
    cfg.h = dom.at("h").get<double>();
    cfg.collar_width = dom.value("collar", 4);
    if (dom.contains("path"))
      cfg.shape_pgm_path =
          (std::filesystem::path(base_dir) / dom.at("path").get<std::string>())
              .string();

    if (j.contains("weight")) {
      const auto& w = j.at("weight");
      cfg.weight_name = w.at("name").get<std::string>();
      read_params(w, cfg.weight_params);
    }
    if (j.contains("boundary")) {
      const auto& b = j.at("boundary");
      cfg.boundary_name = b.at("name").get<std::string>();
      read_params(b, cfg.boundary_params);
      if (b.contains("path"))
        cfg.boundary_csv_path =
            (std::filesystem::path(base_dir) / b.at("path").get<std::string>())
                .string();
    }

    cfg.stencil_neighbors = j.value("stencil", 16);
    cfg.levels = j.value("levels", 64);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
      cfg.solver.gap_tol = s.value("gap_tol", cfg.solver.gap_tol);
      cfg.solver.check_every = s.value("check_every", cfg.solver.check_every);
      cfg.solver.step_ratio = s.value("step_ratio", cfg.solver.step_ratio);
    }
    cfg.run_tv_cross_check = j.value("tv_cross_check", true);
    if (j.contains("checks"))
      for (const auto& c : j.at("checks"))
        cfg.checks.push_back(c.get<std::string>());
    if (j.contains("tolerances"))
      for (auto it = j.at("tolerances").begin(); it != j.at("tolerances").end(); ++it)
        cfg.tolerances[it.key()] = it.value().get<double>();
    cfg.output_dir = j.value("output", std::string("out"));
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.threads = j.value("threads", 1);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }

  if (cfg.levels < 1) throw ConfigError("levels (K) must be at least 1");
  if (!(cfg.h > 0)) throw ConfigError("h must be positive");
  if (cfg.collar_width < 3) throw ConfigError("collar width must be at least 3");
  if (cfg.solver.max_iter <= 0 || cfg.solver.gap_tol <= 0)
    throw ConfigError("solver parameters must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  auto base = std::filesystem::path(path).parent_path().string();
  return config_from_json_text(read_text_file(path), base);
}

DiscreteDomain build_domain_from_config(const ExperimentConfig& cfg) {
  const auto& p = cfg.shape_params;
  ShapeSpec shape;
  if (cfg.shape_name == "disk") {
    shape = shape_disk(param(p, "cx", 0.0), param(p, "cy", 0.0),
                       require_param(p, "r", "disk"));
  } else if (cfg.shape_name == "rect") {
    shape = shape_rect(require_param(p, "x0", "rect"), require_param(p, "y0", "rect"),
                       require_param(p, "x1", "rect"), require_param(p, "y1", "rect"));
  } else if (cfg.shape_name == "annulus") {
    shape = shape_annulus(param(p, "cx", 0.0), param(p, "cy", 0.0),
                          require_param(p, "r_in", "annulus"),
                          require_param(p, "r_out", "annulus"));
  } else if (cfg.shape_name == "two_disks") {
    shape = shape_two_disks(require_param(p, "c1x", "two_disks"),
                            require_param(p, "c1y", "two_disks"),
                            require_param(p, "r1", "two_disks"),
                            require_param(p, "c2x", "two_disks"),
                            require_param(p, "c2y", "two_disks"),
                            require_param(p, "r2", "two_disks"));
  } else if (cfg.shape_name == "ball") {
    shape = shape_ball(param(p, "cx", 0.0), param(p, "cy", 0.0),
                       param(p, "cz", 0.0), require_param(p, "r", "ball"));
  } else if (cfg.shape_name == "box") {
    shape = shape_box(require_param(p, "x0", "box"), require_param(p, "y0", "box"),
                      require_param(p, "z0", "box"), require_param(p, "x1", "box"),
                      require_param(p, "y1", "box"), require_param(p, "z1", "box"));
  } else if (cfg.shape_name == "pgm") {
    PgmImage img = read_pgm(cfg.shape_pgm_path);
    std::vector<std::uint8_t> px(img.pixels.size());
    // image rows top-down; flip so row 0 becomes the highest y
    for (int r = 0; r < img.height; ++r)
      for (int c = 0; c < img.width; ++c)
        px[static_cast<size_t>(img.height - 1 - r) * img.width + c] =
            img.pixels[static_cast<size_t>(r) * img.width + c] > 0 ? 1 : 0;
    shape = shape_from_mask(px, img.width, img.height, cfg.h);
  } else {
    throw ConfigError("unknown shape '" + cfg.shape_name + "'");
  }
  return build_domain(shape, cfg.h, cfg.collar_width);
}

WeightField build_weight_from_config(const ExperimentConfig& cfg,
                                     const DiscreteDomain& dom) {
  const auto& p = cfg.weight_params;
  if (cfg.weight_name == "const") {
    return make_weight_constant(dom.grid, param(p, "value", 1.0));
  }
  if (cfg.weight_name == "one_plus_r2") {
    double cx = param(p, "cx", 0.0), cy = param(p, "cy", 0.0);
    return make_weight_analytic(dom.grid, [cx, cy](const Point& x) {
      double dx = x[0] - cx, dy = x[1] - cy;
      return 1.0 + dx * dx + dy * dy + x[2] * x[2];
    });
  }
  if (cfg.weight_name == "boundary_dist") {
    double scale = param(p, "scale", 1.0);
    auto dist = boundary_distance(dom);
    std::vector<double> samples(dom.grid.ncells());
    for (int c = 0; c < dom.grid.ncells(); ++c)
      samples[c] = 1.0 + scale * dist[c];
    return make_weight_samples(dom.grid, samples);
  }
  throw ConfigError("unknown weight '" + cfg.weight_name + "'");
}

BoundaryData build_boundary_from_config(const ExperimentConfig& cfg,
                                        const DiscreteDomain& dom) {
  const auto& p = cfg.boundary_params;
  if (cfg.boundary_name == "const") {
    double v = param(p, "value", 0.0);
    return extend_boundary_data(dom, [v](const Point&) { return v; });
  }
  if (cfg.boundary_name == "cos_theta") {
    double cx = param(p, "cx", 0.0), cy = param(p, "cy", 0.0);
    return extend_boundary_data(dom, [cx, cy](const Point& x) {
      double dx = x[0] - cx, dy = x[1] - cy;
      double r = std::sqrt(dx * dx + dy * dy);
      return r > 0 ? dx / r : 1.0;
    });
  }
  if (cfg.boundary_name == "coord") {
    int axis = static_cast<int>(param(p, "axis", 0.0));
    if (axis < 0 || axis >= dom.grid.dim)
      throw ConfigError("coord boundary axis out of range");
    return extend_boundary_data(dom,
                                [axis](const Point& x) { return x[axis]; });
  }
  if (cfg.boundary_name == "csv") {
    auto rows = read_boundary_csv(cfg.boundary_csv_path);
    std::vector<double> g(dom.boundary_cells.size(), 0.0);
    std::vector<bool> seen(dom.boundary_cells.size(), false);
    for (auto& [idx, v] : rows) {
      auto it = std::lower_bound(dom.boundary_cells.begin(),
                                 dom.boundary_cells.end(), idx);
      if (it == dom.boundary_cells.end() || *it != idx)
        throw ConfigError("CSV cell " + std::to_string(idx) +
                          " is not a boundary cell");
      size_t k = it - dom.boundary_cells.begin();
      g[k] = v;
      seen[k] = true;
    }
    for (size_t k = 0; k < seen.size(); ++k)
      if (!seen[k])
        throw ConfigError("boundary cell " +
                          std::to_string(dom.boundary_cells[k]) +
                          " missing from CSV");
    return extend_boundary_data(dom, g);
  }
  throw ConfigError("unknown boundary data '" + cfg.boundary_name + "'");
}

std::string config_hash(const ExperimentConfig& cfg) {
  // canonical dump + FNV-1a; stable across runs
  nlohmann::ordered_json j;
  j["schema_version"] = cfg.schema_version;
  j["shape"] = cfg.shape_name;
  for (auto& [k, v] : cfg.shape_params) j["shape_params"][k] = v;
  j["h"] = cfg.h;
  j["collar"] = cfg.collar_width;
  j["weight"] = cfg.weight_name;
  for (auto& [k, v] : cfg.weight_params) j["weight_params"][k] = v;
  j["boundary"] = cfg.boundary_name;
  for (auto& [k, v] : cfg.boundary_params) j["boundary_params"][k] = v;
  j["stencil"] = cfg.stencil_neighbors;
  j["levels"] = cfg.levels;
  j["max_iter"] = cfg.solver.max_iter;
  j["gap_tol"] = cfg.solver.gap_tol;
  j["seed"] = cfg.seed;
  std::string s = j.dump();
  std::uint64_t hval = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    hval ^= c;
    hval *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hval));
  return buf;
}

}  // namespace wlg
