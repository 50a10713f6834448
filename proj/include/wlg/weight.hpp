#pragma once

#include <functional>
#include <vector>

#include "wlg/grid.hpp"

namespace wlg {

// Weight samples at cells plus the certified lower bound alpha > 0. When an
// analytic form is attached, face values are the analytic weight at the face
// midpoint; otherwise the mean of the two cell samples.
struct WeightField {
  Grid grid;
  std::vector<double> cell;
  double alpha = 1.0;
  std::function<double(const Point&)> analytic;  // may be empty

  double at_cell(int idx) const { return cell[idx]; }
  double at_face(int a, int b) const {
    if (analytic) {
      Point pa = grid.center(a), pb = grid.center(b);
      return analytic({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]),
                       0.5 * (pa[2] + pb[2])});
    }
    return 0.5 * (cell[a] + cell[b]);
  }
};

WeightField make_weight_constant(const Grid& grid, double value);
WeightField make_weight_analytic(const Grid& grid,
                                 std::function<double(const Point&)> f);
WeightField make_weight_samples(const Grid& grid, std::vector<double> samples);

// Validates the non-degeneracy bound min over samples >= alpha > 0.
void check_nondegenerate(const WeightField& w);

}  // namespace wlg
