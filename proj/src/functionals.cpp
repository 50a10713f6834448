#include "wlg/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace wlg {

namespace {

// Applies fn(a, b, k, weight) to every in-box stencil edge with midpoint in
// the region, in deterministic cell-major order.
template <typename Fn>
void for_each_region_edge(const Grid& g, const CellRegion& region,
                          const CutStencil& st, Fn&& fn) {
  require_same_grid(g, region.grid, "region edges");
  for (int a = 0; a < g.ncells(); ++a) {
    for (size_t k = 0; k < st.offsets.size(); ++k) {
      const auto& o = st.offsets[k];
      int b = g.shift(a, o.d[0], o.d[1], o.d[2]);
      if (b < 0) continue;
      int mid = edge_midpoint_cell(g, a, o.d);
      if (mid < 0 || !region.contains(mid)) continue;
      fn(a, b, static_cast<int>(k));
    }
  }
}

}  // namespace

double alpha_perimeter(const IndicatorSet& E, const CellRegion& region,
                       const WeightField& w, const CutStencil& st) {
  require_same_grid(E.grid, w.grid, "alpha_perimeter");
  if (st.dim != E.grid.dim) throw DomainMismatch("stencil dimension mismatch");
  KahanSum sum;
  for_each_region_edge(E.grid, region, st, [&](int a, int b, int k) {
    if (E.v[a] != E.v[b]) sum.add(w.at_face(a, b) * st.weight(E.grid, k));
  });
  return sum.value();
}

double alpha_total_variation(const ScalarField& u, const CellRegion& region,
                             const WeightField& w, const CutStencil& st) {
  require_same_grid(u.grid, w.grid, "alpha_total_variation");
  if (st.dim != u.grid.dim) throw DomainMismatch("stencil dimension mismatch");
  KahanSum sum;
  for_each_region_edge(u.grid, region, st, [&](int a, int b, int k) {
    double d = std::abs(u.v[a] - u.v[b]);
    if (d != 0.0) sum.add(w.at_face(a, b) * st.weight(u.grid, k) * d);
  });
  return sum.value();
}

CoareaResult coarea_quadrature(const ScalarField& u, const CellRegion& region,
                               const WeightField& w, const CutStencil& st) {
  double tv = alpha_total_variation(u, region, w, st);

  std::vector<double> vals(u.v);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  KahanSum coarea;
  int levels = 0;
  IndicatorSet E(u.grid);
  for (size_t i = 0; i + 1 < vals.size(); ++i) {
    double t = 0.5 * (vals[i] + vals[i + 1]);
    double gap = vals[i + 1] - vals[i];
    for (int c = 0; c < u.grid.ncells(); ++c) E.v[c] = u.v[c] >= t ? 1 : 0;
    coarea.add(alpha_perimeter(E, region, w, st) * gap);
    ++levels;
  }
  return {tv, coarea.value(), levels};
}

double submodularity_defect(const IndicatorSet& E1, const IndicatorSet& E2,
                            const CellRegion& region, const WeightField& w,
                            const CutStencil& st) {
  require_same_grid(E1.grid, E2.grid, "submodularity_defect");
  double p1 = alpha_perimeter(E1, region, w, st);
  double p2 = alpha_perimeter(E2, region, w, st);
  double pu = alpha_perimeter(set_union(E1, E2), region, w, st);
  double pi = alpha_perimeter(set_intersection(E1, E2), region, w, st);
  return p1 + p2 - pu - pi;
}

DualPairing dual_pairing_and_gap(const ScalarField& u,
                                 const DiscreteVectorField& Y,
                                 const WeightField& w) {
  const Grid& g = u.grid;
  require_same_grid(g, Y.grid, "dual_pairing_and_gap");
  require_same_grid(g, w.grid, "dual_pairing_and_gap");
  const int dim = g.dim;
  const double hn = g.cell_volume();

  // div_h is the exact negative adjoint of the zero-padded forward-difference
  // gradient, so sum u * div_h Y == -<grad u, Y> identically.
  KahanSum pairing;
  for (int c = 0; c < g.ncells(); ++c) {
    double div = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
      int prev = g.shift(c, ax == 0 ? -1 : 0, ax == 1 ? -1 : 0, ax == 2 ? -1 : 0);
      double yprev = prev >= 0 ? Y.at(prev, ax) : 0.0;
      div += (Y.at(c, ax) - yprev) / g.h;
    }
    if (u.v[c] != 0.0 && div != 0.0) pairing.add(u.v[c] * div * hn);
  }

  double viol = 0.0;
  for (int c = 0; c < g.ncells(); ++c) {
    double m2 = 0.0;
    for (int ax = 0; ax < dim; ++ax) m2 += Y.at(c, ax) * Y.at(c, ax);
    viol = std::max(viol, std::sqrt(m2) - w.cell[c]);
  }
  return {pairing.value(), std::max(0.0, viol)};
}

double pointwise_total_variation(const ScalarField& u, const WeightField& w) {
  const Grid& g = u.grid;
  require_same_grid(g, w.grid, "pointwise_total_variation");
  const double hn = g.cell_volume();
  KahanSum sum;
  for (int c = 0; c < g.ncells(); ++c) {
    double m2 = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
      int nb = g.shift(c, ax == 0 ? 1 : 0, ax == 1 ? 1 : 0, ax == 2 ? 1 : 0);
      double d = nb >= 0 ? (u.v[nb] - u.v[c]) / g.h : 0.0;
      m2 += d * d;
    }
    if (m2 != 0.0) sum.add(w.cell[c] * std::sqrt(m2) * hn);
  }
  return sum.value();
}

}  // namespace wlg
