#include "wlg/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

namespace wlg {

BoundaryData extend_boundary_data(const DiscreteDomain& dom,
                                  const std::vector<double>& g_vals) {
  const Grid& g = dom.grid;
  if (g_vals.size() != dom.boundary_cells.size())
    throw Error("boundary value count does not match boundary cells");
  for (double v : g_vals)
    if (!std::isfinite(v)) throw Error("boundary values must be finite");

  BoundaryData bd;
  bd.grid = g;
  double nan = std::numeric_limits<double>::quiet_NaN();
  bd.g.assign(g.ncells(), nan);
  bd.G.assign(g.ncells(), nan);
  bd.nearest.assign(g.ncells(), -1);

  for (size_t i = 0; i < dom.boundary_cells.size(); ++i)
    bd.g[dom.boundary_cells[i]] = g_vals[i];

  // Nearest boundary cell by center distance. Squared distances are integers
  // in units of h^2, so comparisons are exact; ties go to the lowest cell
  // index, and boundary_cells is already sorted by index.
  for (int q : dom.collar_cells) {
    auto qc = g.coords(q);
    std::int64_t best = -1;
    int best_cell = -1;
    for (int b : dom.boundary_cells) {
      auto bc = g.coords(b);
      std::int64_t dx = qc[0] - bc[0], dy = qc[1] - bc[1], dz = qc[2] - bc[2];
      std::int64_t d2 = dx * dx + dy * dy + dz * dz;
      if (best < 0 || d2 < best) {
        best = d2;
        best_cell = b;
      }
    }
    bd.nearest[q] = best_cell;
    bd.G[q] = bd.g[best_cell];
  }

  bd.min_value = *std::min_element(g_vals.begin(), g_vals.end());
  bd.max_value = *std::max_element(g_vals.begin(), g_vals.end());
  return bd;
}

IndicatorSet superlevel_exterior(const DiscreteDomain& dom,
                                 const BoundaryData& bd, double t) {
  require_same_grid(dom.grid, bd.grid, "superlevel_exterior");
  if (!std::isfinite(t)) throw Error("level must be finite");
  IndicatorSet L(dom.grid);
  for (int q : dom.collar_cells) L.set(q, bd.G[q] >= t);
  return L;
}

double boundary_modulus(const DiscreteDomain& dom, const BoundaryData& bd,
                        double r) {
  const Grid& g = dom.grid;
  double r2 = r * r, best = 0.0;
  for (size_t i = 0; i < dom.boundary_cells.size(); ++i) {
    int a = dom.boundary_cells[i];
    Point pa = g.center(a);
    for (size_t j = i + 1; j < dom.boundary_cells.size(); ++j) {
      int b = dom.boundary_cells[j];
      Point pb = g.center(b);
      Point d = pa - pb;
      if (dot(d, d) <= r2)
        best = std::max(best, std::abs(bd.g[a] - bd.g[b]));
    }
  }
  return best;
}

std::vector<double> plateau_values(const DiscreteDomain& dom,
                                   const BoundaryData& bd, int min_cells) {
  std::map<double, int> counts;
  for (int b : dom.boundary_cells) counts[bd.g[b]]++;
  std::vector<double> out;
  for (auto& [v, n] : counts)
    if (n >= min_cells) out.push_back(v);
  return out;
}

}  // namespace wlg
