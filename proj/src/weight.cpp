#include "wlg/weight.hpp"

#include <algorithm>
#include <cmath>

namespace wlg {

WeightField make_weight_constant(const Grid& grid, double value) {
  WeightField w;
  w.grid = grid;
  w.cell.assign(grid.ncells(), value);
  w.alpha = value;
  w.analytic = [value](const Point&) { return value; };
  check_nondegenerate(w);
  return w;
}

WeightField make_weight_analytic(const Grid& grid,
                                 std::function<double(const Point&)> f) {
  WeightField w;
  w.grid = grid;
  w.cell.resize(grid.ncells());
  double mn = std::numeric_limits<double>::infinity();
  for (int c = 0; c < grid.ncells(); ++c) {
    w.cell[c] = f(grid.center(c));
    mn = std::min(mn, w.cell[c]);
  }
  w.alpha = mn;
  w.analytic = std::move(f);
  check_nondegenerate(w);
  return w;
}

WeightField make_weight_samples(const Grid& grid, std::vector<double> samples) {
  WeightField w;
  w.grid = grid;
  w.cell = std::move(samples);
  w.alpha = *std::min_element(w.cell.begin(), w.cell.end());
  check_nondegenerate(w);
  return w;
}

void check_nondegenerate(const WeightField& w) {
  if (!(w.alpha > 0.0))
    throw Error("weight lower bound must be positive");
  for (double v : w.cell)
    if (!(v >= w.alpha) || !std::isfinite(v))
      throw Error("weight sample below the certified lower bound");
}

}  // namespace wlg
