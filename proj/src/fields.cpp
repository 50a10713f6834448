#include "wlg/fields.hpp"

namespace wlg {

IndicatorSet set_union(const IndicatorSet& a, const IndicatorSet& b) {
  require_same_grid(a.grid, b.grid, "set_union");
  IndicatorSet r(a.grid);
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = (a.v[i] || b.v[i]) ? 1 : 0;
  return r;
}

IndicatorSet set_intersection(const IndicatorSet& a, const IndicatorSet& b) {
  require_same_grid(a.grid, b.grid, "set_intersection");
  IndicatorSet r(a.grid);
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = (a.v[i] && b.v[i]) ? 1 : 0;
  return r;
}

}  // namespace wlg
