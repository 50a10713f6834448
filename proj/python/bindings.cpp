#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wlg/boundary.hpp"
#include "wlg/conformal.hpp"
#include "wlg/config.hpp"
#include "wlg/experiment.hpp"
#include "wlg/functionals.hpp"
#include "wlg/level_set.hpp"
#include "wlg/mse.hpp"
#include "wlg/set_minimizer.hpp"
#include "wlg/tv_solver.hpp"

namespace py = pybind11;
using namespace wlg;

namespace {

py::array_t<double> field_to_numpy(const ScalarField& f) {
  const Grid& g = f.grid;
  if (g.dim == 3) {
    py::array_t<double> a({g.size[2], g.size[1], g.size[0]});
    std::copy(f.v.begin(), f.v.end(), a.mutable_data());
    return a;
  }
  py::array_t<double> a({g.size[1], g.size[0]});
  std::copy(f.v.begin(), f.v.end(), a.mutable_data());
  return a;
}

ScalarField field_from_numpy(const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
  if (arr.size() != g.ncells()) throw DomainMismatch("array size != grid cells");
  ScalarField f(g);
  std::copy(arr.data(), arr.data() + arr.size(), f.v.begin());
  return f;
}

py::array_t<std::uint8_t> mask_to_numpy(const IndicatorSet& E) {
  const Grid& g = E.grid;
  if (g.dim == 3) {
    py::array_t<std::uint8_t> a({g.size[2], g.size[1], g.size[0]});
    std::copy(E.v.begin(), E.v.end(), a.mutable_data());
    return a;
  }
  py::array_t<std::uint8_t> a({g.size[1], g.size[0]});
  std::copy(E.v.begin(), E.v.end(), a.mutable_data());
  return a;
}

IndicatorSet mask_from_numpy(const Grid& g, py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> arr) {
  if (arr.size() != g.ncells()) throw DomainMismatch("array size != grid cells");
  IndicatorSet E(g);
  std::copy(arr.data(), arr.data() + arr.size(), E.v.begin());
  return E;
}

}  // namespace

PYBIND11_MODULE(_wlg, m) {
  m.doc() = "weighted least gradient construction on discrete grids";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DomainMismatch>(m, "DomainMismatchError");
  py::register_exception<TooLarge>(m, "TooLargeError");
  py::register_exception<NestednessViolation>(m, "NestednessViolationError");

  py::class_<Grid>(m, "Grid")
      .def_readonly("dim", &Grid::dim)
      .def_readonly("h", &Grid::h)
      .def_property_readonly("size", [](const Grid& g) -> py::tuple {
        if (g.dim == 3) return py::make_tuple(g.size[0], g.size[1], g.size[2]);
        return py::make_tuple(g.size[0], g.size[1]);
      })
      .def("ncells", &Grid::ncells)
      .def("center", [](const Grid& g, int idx) -> py::tuple {
        Point p = g.center(idx);
        if (g.dim == 3) return py::make_tuple(p[0], p[1], p[2]);
        return py::make_tuple(p[0], p[1]);
      });

  py::class_<DiscreteDomain>(m, "DiscreteDomain")
      .def_readonly("grid", &DiscreteDomain::grid)
      .def_property_readonly("interior_cells",
                             [](const DiscreteDomain& d) { return d.interior_cells; })
      .def_property_readonly("boundary_cells",
                             [](const DiscreteDomain& d) { return d.boundary_cells; })
      .def_property_readonly("interior_mask", [](const DiscreteDomain& d) {
        IndicatorSet E(d.grid);
        E.v = d.interior;
        return mask_to_numpy(E);
      });

  m.def("build_disk_domain",
        [](double cx, double cy, double r, double h, int collar) {
          return build_domain(shape_disk(cx, cy, r), h, collar);
        },
        py::arg("cx"), py::arg("cy"), py::arg("r"), py::arg("h"),
        py::arg("collar") = 4);
  m.def("build_rect_domain",
        [](double x0, double y0, double x1, double y1, double h, int collar) {
          return build_domain(shape_rect(x0, y0, x1, y1), h, collar);
        },
        py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"), py::arg("h"),
        py::arg("collar") = 4);

  py::class_<WeightField>(m, "WeightField")
      .def_readonly("alpha", &WeightField::alpha)
      .def("cells", [](const WeightField& w) {
        ScalarField f(w.grid);
        f.v = w.cell;
        return field_to_numpy(f);
      });
  m.def("constant_weight", &make_weight_constant, py::arg("grid"), py::arg("value"));
  m.def("weight_from_function",
        [](const Grid& g, const std::function<double(double, double)>& f) {
          return make_weight_analytic(
              g, [f](const Point& p) { return f(p[0], p[1]); });
        });

  py::class_<BoundaryData>(m, "BoundaryData")
      .def_readonly("min_value", &BoundaryData::min_value)
      .def_readonly("max_value", &BoundaryData::max_value);
  m.def("extend_boundary_data",
        [](const DiscreteDomain& d, const std::function<double(double, double)>& g) {
          return extend_boundary_data(
              d, [g](const Point& p) { return g(p[0], p[1]); });
        });
  m.def("superlevel_exterior",
        [](const DiscreteDomain& d, const BoundaryData& bd, double t) {
          return mask_to_numpy(superlevel_exterior(d, bd, t));
        });

  py::class_<CutStencil>(m, "CutStencil")
      .def_readonly("dim", &CutStencil::dim)
      .def_readonly("neighbors", &CutStencil::neighbors);
  m.def("make_stencil", &make_stencil, py::arg("dim"), py::arg("neighbors"));

  m.def("alpha_perimeter",
        [](py::array_t<std::uint8_t> E, const DiscreteDomain& dom,
           const WeightField& w, const CutStencil& st, bool interior_only) {
          auto region = interior_only ? interior_region(dom)
                                      : CellRegion::whole_box(dom.grid);
          return alpha_perimeter(mask_from_numpy(dom.grid, E), region, w, st);
        },
        py::arg("mask"), py::arg("dom"), py::arg("weight"), py::arg("stencil"),
        py::arg("interior_only") = false);
  m.def("alpha_total_variation",
        [](py::array_t<double> u, const DiscreteDomain& dom, const WeightField& w,
           const CutStencil& st, bool interior_only) {
          auto region = interior_only ? interior_region(dom)
                                      : CellRegion::whole_box(dom.grid);
          return alpha_total_variation(field_from_numpy(dom.grid, u), region, w, st);
        },
        py::arg("u"), py::arg("dom"), py::arg("weight"), py::arg("stencil"),
        py::arg("interior_only") = false);
  m.def("coarea_quadrature",
        [](py::array_t<double> u, const DiscreteDomain& dom, const WeightField& w,
           const CutStencil& st) {
          auto r = coarea_quadrature(field_from_numpy(dom.grid, u),
                                     CellRegion::whole_box(dom.grid), w, st);
          return py::make_tuple(r.tv_value, r.coarea_value, r.levels_used);
        });
  m.def("submodularity_defect",
        [](py::array_t<std::uint8_t> E1, py::array_t<std::uint8_t> E2,
           const DiscreteDomain& dom, const WeightField& w, const CutStencil& st) {
          return submodularity_defect(mask_from_numpy(dom.grid, E1),
                                      mask_from_numpy(dom.grid, E2),
                                      CellRegion::whole_box(dom.grid), w, st);
        });

  py::class_<MinimizerPair>(m, "MinimizerPair")
      .def_readonly("value", &MinimizerPair::value)
      .def_property_readonly("E_min", [](const MinimizerPair& p) {
        return mask_to_numpy(p.E_min);
      })
      .def_property_readonly("E_max", [](const MinimizerPair& p) {
        return mask_to_numpy(p.E_max);
      });
  m.def("solve_star",
        [](const DiscreteDomain& d, const WeightField& w, const CutStencil& st,
           py::array_t<std::uint8_t> L) {
          return solve_star(d, w, st, mask_from_numpy(d.grid, L));
        });
  m.def("exhaustive_min",
        [](const DiscreteDomain& d, const WeightField& w, const CutStencil& st,
           py::array_t<std::uint8_t> L) {
          return exhaustive_min(d, w, st, mask_from_numpy(d.grid, L));
        });
  m.def("barrier_check",
        [](const DiscreteDomain& d, const WeightField& w, const CutStencil& st,
           int x0_cell, double eps, double margin_cells) {
          auto r = barrier_check(d, w, st, x0_cell, eps, margin_cells);
          return py::make_tuple(r.pass, mask_to_numpy(r.V_star), r.witness_cells);
        },
        py::arg("dom"), py::arg("weight"), py::arg("stencil"), py::arg("x0_cell"),
        py::arg("eps"), py::arg("margin_cells") = 4.0);

  py::class_<LevelSetFamily>(m, "LevelSetFamily")
      .def_readonly("levels", &LevelSetFamily::levels)
      .def("num_levels", &LevelSetFamily::num_levels)
      .def("representative", [](const LevelSetFamily& f, int k) {
        return mask_to_numpy(f.rep(k));
      });
  m.def("build_family", &build_family, py::arg("dom"), py::arg("weight"),
        py::arg("stencil"), py::arg("boundary"), py::arg("K"));
  m.def("assemble_solution",
        [](const LevelSetFamily& fam, const DiscreteDomain& dom,
           const BoundaryData& bd) {
          return field_to_numpy(assemble_solution(fam, dom, bd));
        });

  py::class_<PdCertificate>(m, "PdCertificate")
      .def_readonly("primal", &PdCertificate::primal)
      .def_readonly("dual", &PdCertificate::dual)
      .def_readonly("gap", &PdCertificate::gap)
      .def_readonly("iterations", &PdCertificate::iterations)
      .def_readonly("converged", &PdCertificate::converged);
  m.def("solve_dirichlet_tv",
        [](const DiscreteDomain& d, const WeightField& w, const BoundaryData& bd,
           int max_iter, double gap_tol) {
          PdParams params;
          params.max_iter = max_iter;
          params.gap_tol = gap_tol;
          auto sol = solve_dirichlet_tv(d, w, bd, params);
          return py::make_tuple(field_to_numpy(sol.u), sol.certificate);
        },
        py::arg("dom"), py::arg("weight"), py::arg("boundary"),
        py::arg("max_iter") = 20000, py::arg("gap_tol") = 1e-4);

  m.def("conformal_mass_circle",
        [](double cx, double cy, double r, int segments,
           const std::function<double(double, double)>& a, double sigma) {
          auto cm = conformal_mass(
              make_circle_polyline(cx, cy, r, segments),
              [a](const Point& p) { return a(p[0], p[1]); }, sigma);
          return py::make_tuple(cm.weighted_area, cm.riemannian_area);
        });
  m.def("conformal_mass_sphere",
        [](double r, int level, double const_weight, double sigma) {
          auto cm = conformal_mass_icosphere(
              r, level, [&](const Point&) { return const_weight; }, sigma);
          return py::make_tuple(cm.weighted_area, cm.riemannian_area);
        });

  // graph-patch minimal surface machinery
  py::class_<MseSolveResult>(m, "MseSolveResult")
      .def_readonly("converged", &MseSolveResult::converged)
      .def_readonly("iterations", &MseSolveResult::iterations)
      .def_readonly("residual_norm", &MseSolveResult::residual_norm)
      .def_property_readonly("u", [](const MseSolveResult& r) {
        return py::array_t<double>(r.patch.u.size(), r.patch.u.data());
      });
  m.def("solve_mse_line",
        [](double x0, double x1, int nodes, double u0, double u1) {
          PatchGeometry geo;
          geo.base_dim = 1;
          geo.n = {nodes, 1};
          geo.h = (x1 - x0) / (nodes - 1);
          geo.origin = {x0, 0.0};
          return solve_mse_dirichlet(geo, patch_weight_constant(1.0),
                                     [&](const Point& p) {
                                       return p[0] <= x0 ? u0 : u1;
                                     });
        },
        py::arg("x0"), py::arg("x1"), py::arg("nodes"), py::arg("u0"),
        py::arg("u1"));

  m.def("run_experiment", [](const std::string& config_path) {
    ExperimentConfig cfg = load_config(config_path);
    RunReport rep = run_experiment(cfg);
    py::list checks;
    for (auto& c : rep.checks) {
      py::dict d;
      d["name"] = c.name;
      d["status"] = c.status;
      d["value"] = c.value;
      d["tolerance"] = c.tolerance;
      checks.append(d);
    }
    return py::make_tuple(rep.all_passed(), checks);
  });
}
