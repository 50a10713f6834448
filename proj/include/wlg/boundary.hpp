#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wlg/fields.hpp"
#include "wlg/grid.hpp"

namespace wlg {

// Boundary values g on the boundary cells and their continuous extension G on
// the collar. G is the nearest-boundary-cell value, ties broken by lowest cell
// index; for collar cell q, `nearest[q]` records that boundary cell.
struct BoundaryData {
  Grid grid;
  std::vector<double> g;        // finite on boundary cells, NaN elsewhere
  std::vector<double> G;        // finite on collar cells, NaN elsewhere
  std::vector<int> nearest;     // per collar cell, -1 elsewhere
  double min_value = 0.0;
  double max_value = 0.0;
};

BoundaryData extend_boundary_data(const DiscreteDomain& dom,
                                  const std::vector<double>& g_on_boundary_cells);

inline BoundaryData extend_boundary_data(
    const DiscreteDomain& dom, const std::function<double(const Point&)>& g) {
  std::vector<double> vals;
  vals.reserve(dom.boundary_cells.size());
  for (int c : dom.boundary_cells) vals.push_back(g(dom.grid.center(c)));
  return extend_boundary_data(dom, vals);
}

// Exterior superlevel set {G >= t} as an indicator on the box (collar cells
// only, interior cells are 0). Monotone nonincreasing in t.
IndicatorSet superlevel_exterior(const DiscreteDomain& dom,
                                 const BoundaryData& bd, double t);

// Sampled modulus of continuity of g: max |g(c)-g(c')| over boundary-cell
// pairs with center distance <= r.
double boundary_modulus(const DiscreteDomain& dom, const BoundaryData& bd,
                        double r);

// Values of g with at least `min_cells` exact duplicates among boundary cells;
// the discrete plateau detector used by the separation checker.
std::vector<double> plateau_values(const DiscreteDomain& dom,
                                   const BoundaryData& bd, int min_cells = 3);

}  // namespace wlg
