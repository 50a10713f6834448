#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wlg/grid.hpp"

namespace wlg {

// Binary field over the grid box; the discrete stand-in for a set of finite
// perimeter. Equality is cell-wise.
struct IndicatorSet {
  Grid grid;
  std::vector<std::uint8_t> v;

  IndicatorSet() = default;
  explicit IndicatorSet(const Grid& g, std::uint8_t fill = 0)
      : grid(g), v(g.ncells(), fill) {}

  bool contains(int idx) const { return v[idx] != 0; }
  void set(int idx, bool b) { v[idx] = b ? 1 : 0; }
  long count() const {
    long n = 0;
    for (auto b : v) n += b != 0;
    return n;
  }
  bool operator==(const IndicatorSet& o) const {
    return grid == o.grid && v == o.v;
  }
  bool subset_of(const IndicatorSet& o) const {
    require_same_grid(grid, o.grid, "subset_of");
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] && !o.v[i]) return false;
    return true;
  }
};

IndicatorSet set_union(const IndicatorSet& a, const IndicatorSet& b);
IndicatorSet set_intersection(const IndicatorSet& a, const IndicatorSet& b);

// Real-valued field over the grid box.
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), v(g.ncells(), fill) {}

  double operator[](int idx) const { return v[idx]; }
  double& operator[](int idx) { return v[idx]; }
};

// Cell-set region argument for the geometric functionals.
struct CellRegion {
  Grid grid;
  std::vector<std::uint8_t> mask;

  static CellRegion whole_box(const Grid& g) {
    return {g, std::vector<std::uint8_t>(g.ncells(), 1)};
  }
  static CellRegion from_cells(const Grid& g, const std::vector<int>& cells) {
    CellRegion r{g, std::vector<std::uint8_t>(g.ncells(), 0)};
    for (int c : cells) r.mask[c] = 1;
    return r;
  }
  bool contains(int idx) const { return mask[idx] != 0; }
};

inline CellRegion interior_region(const DiscreteDomain& dom) {
  return CellRegion{dom.grid, dom.interior};
}

}  // namespace wlg
