#include "wlg/set_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wlg/maxflow.hpp"

namespace wlg {

namespace {

// Largest power of two keeping the total integer capacity below 2^60, so pin
// capacities and flows stay well inside int64.
double choose_scale(double finite_sum) {
  if (!std::isfinite(finite_sum) || finite_sum < 0)
    throw CapacityOverflow("nonfinite capacities");
  double target = std::ldexp(1.0, 60) / std::max(finite_sum, 1e-300);
  int e = static_cast<int>(std::floor(std::log2(target)));
  return std::ldexp(1.0, e);
}

}  // namespace

double CutProblem::value_of(const IndicatorSet& E) const {
  return static_cast<double>(value_int_of(E)) / scale;
}

std::int64_t CutProblem::value_int_of(const IndicatorSet& E) const {
  std::int64_t v = 0;
  for (const auto& e : edges)
    if (E.v[e.a] != E.v[e.b]) v += e.cap;
  return v;
}

CutProblem build_cut_problem(const DiscreteDomain& dom, const WeightField& w,
                             const CutStencil& st, const IndicatorSet& exterior,
                             const std::vector<Pin>* pin_override) {
  require_same_grid(dom.grid, w.grid, "build_cut_problem");
  require_same_grid(dom.grid, exterior.grid, "build_cut_problem");
  if (st.dim != dom.grid.dim) throw DomainMismatch("stencil dimension mismatch");

  CutProblem cp;
  cp.grid = dom.grid;
  if (pin_override) {
    cp.pin = *pin_override;
  } else {
    cp.pin.assign(dom.grid.ncells(), Pin::Free);
    for (int q : dom.collar_cells)
      cp.pin[q] = exterior.contains(q) ? Pin::In : Pin::Out;
  }

  const Grid& g = cp.grid;
  double finite_sum = 0.0;
  std::vector<std::pair<std::pair<int, int>, double>> raw;
  for (int a = 0; a < g.ncells(); ++a) {
    for (size_t k = 0; k < st.offsets.size(); ++k) {
      const auto& o = st.offsets[k];
      int b = g.shift(a, o.d[0], o.d[1], o.d[2]);
      if (b < 0) continue;
      double cap = w.at_face(a, b) * st.weight(g, k);
      if (!(cap > 0.0) || !std::isfinite(cap))
        throw CapacityOverflow("edge capacity must be positive and finite");
      raw.push_back({{a, b}, cap});
      finite_sum += cap;
    }
  }
  cp.scale = choose_scale(finite_sum);
  std::int64_t total = 0;
  cp.edges.reserve(raw.size());
  for (auto& [ab, cap] : raw) {
    std::int64_t c = std::llround(cap * cp.scale);
    if (c <= 0) c = 1;  // keep strict positivity after rounding
    cp.edges.push_back({ab.first, ab.second, c});
    total += c;
  }
  cp.pin_cap = total + 1;
  return cp;
}

MinimizerPair solve_cut(const CutProblem& cp) {
  // Pinned cells are never separated from their terminal (pin capacity
  // exceeds the sum of finite capacities), so they can be contracted into the
  // terminals: min-cut value and the extremal cut sets are unchanged, and the
  // flow graph shrinks to the free cells.
  const int n = cp.grid.ncells();
  std::vector<int> node_of(n, -1);
  int nfree = 0;
  for (int c = 0; c < n; ++c)
    if (cp.pin[c] == Pin::Free) node_of[c] = nfree++;
  const int s = nfree, t = nfree + 1;

  std::vector<std::int64_t> cap_s(nfree, 0), cap_t(nfree, 0);
  std::int64_t constant = 0;
  MaxFlow mf(nfree + 2);
  for (const auto& e : cp.edges) {
    Pin pa = cp.pin[e.a], pb = cp.pin[e.b];
    if (pa == Pin::Free && pb == Pin::Free) {
      mf.add_edge(node_of[e.a], node_of[e.b], e.cap, e.cap);
    } else if (pa == Pin::Free || pb == Pin::Free) {
      int f = pa == Pin::Free ? e.a : e.b;
      Pin other = pa == Pin::Free ? pb : pa;
      if (other == Pin::In)
        cap_s[node_of[f]] += e.cap;
      else
        cap_t[node_of[f]] += e.cap;
    } else if (pa != pb) {
      constant += e.cap;  // cut between two pinned cells, fixed for all E
    }
  }
  for (int f = 0; f < nfree; ++f) {
    if (cap_s[f] > 0) mf.add_edge(s, f, cap_s[f]);
    if (cap_t[f] > 0) mf.add_edge(f, t, cap_t[f]);
  }

  std::int64_t flow = mf.run(s, t) + constant;

  auto src = mf.source_side();
  auto snk = mf.sink_reaching_side();

  MinimizerPair out;
  out.E_min = IndicatorSet(cp.grid);
  out.E_max = IndicatorSet(cp.grid);
  for (int c = 0; c < n; ++c) {
    if (cp.pin[c] == Pin::Free) {
      out.E_min.v[c] = src[node_of[c]];
      out.E_max.v[c] = snk[node_of[c]] ? 0 : 1;
    } else {
      bool in = cp.pin[c] == Pin::In;
      out.E_min.v[c] = in;
      out.E_max.v[c] = in;
    }
  }
  out.value_int = flow;
  out.scale = cp.scale;
  out.value = static_cast<double>(flow) / cp.scale;
  return out;
}

MinimizerPair solve_star(const DiscreteDomain& dom, const WeightField& w,
                         const CutStencil& st, const IndicatorSet& L_t) {
  CutProblem cp = build_cut_problem(dom, w, st, L_t);
  return solve_cut(cp);
}

namespace {

struct TinyInstance {
  std::vector<int> free_cells;           // cell index per bit
  std::vector<int> bit_of;               // -1 for non-free
  std::int64_t base = 0;                 // pinned-pinned cut
  std::vector<std::int64_t> cost_in;     // added when bit set (edges to pinned-out)
  std::vector<std::int64_t> cost_out;    // added when bit clear (edges to pinned-in)
  struct FreeEdge {
    int i, j;
    std::int64_t cap;
  };
  std::vector<FreeEdge> free_edges;

  std::int64_t value(std::uint32_t mask) const {
    std::int64_t v = base;
    for (size_t i = 0; i < free_cells.size(); ++i) {
      if (mask >> i & 1u)
        v += cost_in[i];
      else
        v += cost_out[i];
    }
    for (const auto& e : free_edges)
      if (((mask >> e.i) ^ (mask >> e.j)) & 1u) v += e.cap;
    return v;
  }
};

TinyInstance make_tiny(const CutProblem& cp) {
  TinyInstance ti;
  ti.bit_of.assign(cp.grid.ncells(), -1);
  for (int c = 0; c < cp.grid.ncells(); ++c)
    if (cp.pin[c] == Pin::Free) {
      ti.bit_of[c] = static_cast<int>(ti.free_cells.size());
      ti.free_cells.push_back(c);
    }
  if (ti.free_cells.size() > 20)
    throw TooLarge("exhaustive oracle limited to 20 free cells");
  ti.cost_in.assign(ti.free_cells.size(), 0);
  ti.cost_out.assign(ti.free_cells.size(), 0);
  for (const auto& e : cp.edges) {
    int bi = ti.bit_of[e.a], bj = ti.bit_of[e.b];
    bool pa_in = cp.pin[e.a] == Pin::In, pb_in = cp.pin[e.b] == Pin::In;
    if (bi < 0 && bj < 0) {
      if (pa_in != pb_in) ti.base += e.cap;
    } else if (bi >= 0 && bj >= 0) {
      ti.free_edges.push_back({bi, bj, e.cap});
    } else {
      int bit = bi >= 0 ? bi : bj;
      bool other_in = bi >= 0 ? pb_in : pa_in;
      if (other_in)
        ti.cost_out[bit] += e.cap;  // cut when the free cell is outside
      else
        ti.cost_in[bit] += e.cap;  // cut when the free cell is inside
    }
  }
  return ti;
}

IndicatorSet mask_to_set(const CutProblem& cp, const TinyInstance& ti,
                         std::uint32_t mask) {
  IndicatorSet E(cp.grid);
  for (int c = 0; c < cp.grid.ncells(); ++c)
    E.v[c] = cp.pin[c] == Pin::In ? 1 : 0;
  for (size_t i = 0; i < ti.free_cells.size(); ++i)
    if (mask >> i & 1u) E.v[ti.free_cells[i]] = 1;
  return E;
}

}  // namespace

MinimizerPair exhaustive_min(const DiscreteDomain& dom, const WeightField& w,
                             const CutStencil& st, const IndicatorSet& L_t) {
  CutProblem cp = build_cut_problem(dom, w, st, L_t);
  TinyInstance ti = make_tiny(cp);
  const size_t F = ti.free_cells.size();
  const std::uint32_t total = 1u << F;

  std::int64_t best = ti.value(0);
  std::uint32_t union_mask = 0, inter_mask = (1u << F) - 1;
  bool first = true;
  for (std::uint32_t m = 0; m < total; ++m) {
    std::int64_t v = ti.value(m);
    if (first || v < best) {
      best = v;
      union_mask = m;
      inter_mask = m;
      first = false;
    } else if (v == best) {
      union_mask |= m;
      inter_mask &= m;
    }
  }
  // lattice property: the union and intersection of optima are optimal
  if (ti.value(union_mask) != best || ti.value(inter_mask) != best)
    throw Error("optimal sets failed to form a lattice");

  MinimizerPair out;
  out.E_min = mask_to_set(cp, ti, inter_mask);
  out.E_max = mask_to_set(cp, ti, union_mask);
  out.value_int = best;
  out.scale = cp.scale;
  out.value = static_cast<double>(best) / cp.scale;
  return out;
}

std::vector<IndicatorSet> exhaustive_optima(const DiscreteDomain& dom,
                                            const WeightField& w,
                                            const CutStencil& st,
                                            const IndicatorSet& L_t,
                                            size_t max_count) {
  CutProblem cp = build_cut_problem(dom, w, st, L_t);
  TinyInstance ti = make_tiny(cp);
  const std::uint32_t total = 1u << ti.free_cells.size();
  std::int64_t best = 0;
  bool first = true;
  for (std::uint32_t m = 0; m < total; ++m) {
    std::int64_t v = ti.value(m);
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  std::vector<IndicatorSet> out;
  for (std::uint32_t m = 0; m < total && out.size() < max_count; ++m)
    if (ti.value(m) == best) out.push_back(mask_to_set(cp, ti, m));
  return out;
}

MinimalityVerdict local_minimality_check(const IndicatorSet& E,
                                         const CellRegion& U,
                                         const DiscreteDomain& dom,
                                         const WeightField& w,
                                         const CutStencil& st, int radius) {
  require_same_grid(E.grid, dom.grid, "local_minimality_check");
  const Grid& g = dom.grid;
  const int halo = st.radius();

  // patch cells must stay compactly inside U (patch + stencil halo in U)
  auto patch_ok = [&](const std::vector<int>& cells) {
    for (int c : cells) {
      auto cc = g.coords(c);
      for (int dz = (g.dim == 3 ? -halo : 0); dz <= (g.dim == 3 ? halo : 0); ++dz)
        for (int dy = -halo; dy <= halo; ++dy)
          for (int dx = -halo; dx <= halo; ++dx) {
            int nb = g.shift(g.index(cc[0], cc[1], cc[2]), dx, dy, dz);
            if (nb < 0 || !U.contains(nb)) return false;
          }
    }
    return true;
  };

  CutProblem base = build_cut_problem(
      dom, w, st, E, nullptr);  // exterior irrelevant; pins overridden below

  int rz = g.dim == 3 ? radius : 1;
  const int max_exhaustive_bits = 12;

  for (int z0 = 0; z0 + rz <= g.size[2]; ++z0)
    for (int y0 = 0; y0 + radius <= g.size[1]; ++y0)
      for (int x0 = 0; x0 + radius <= g.size[0]; ++x0) {
        std::vector<int> cells;
        for (int dz = 0; dz < rz; ++dz)
          for (int dy = 0; dy < radius; ++dy)
            for (int dx = 0; dx < radius; ++dx)
              cells.push_back(g.index(x0 + dx, y0 + dy, z0 + dz));
        if (!patch_ok(cells)) continue;

        std::vector<Pin> pins(g.ncells());
        for (int c = 0; c < g.ncells(); ++c)
          pins[c] = E.v[c] ? Pin::In : Pin::Out;
        for (int c : cells) pins[c] = Pin::Free;
        CutProblem cp = base;
        cp.pin = std::move(pins);

        std::int64_t current = cp.value_int_of(E);
        std::int64_t best;
        if (cells.size() <= max_exhaustive_bits) {
          TinyInstance ti = make_tiny(cp);
          best = ti.value(0);
          for (std::uint32_t m = 1; m < (1u << cells.size()); ++m)
            best = std::min(best, ti.value(m));
        } else {
          best = solve_cut(cp).value_int;
        }
        if (best < current) {
          MinimalityVerdict v;
          v.pass = false;
          v.witness_cell = cells.front();
          v.improvement = static_cast<double>(current - best) / cp.scale;
          return v;
        }
      }
  return {};
}

BarrierResult barrier_check(const DiscreteDomain& dom, const WeightField& w,
                            const CutStencil& st, int x0_cell, double eps,
                            double margin_cells) {
  const Grid& g = dom.grid;
  if (!dom.is_boundary(x0_cell)) throw Error("barrier center must be a boundary cell");
  if (!(eps > 2.0 * g.h)) throw BallTooSmall("eps must exceed 2h");
  Point x0 = g.center(x0_cell);

  bool some_outside = false;
  std::vector<Pin> pins(g.ncells());
  for (int c = 0; c < g.ncells(); ++c) {
    if (!dom.interior[c]) {
      pins[c] = Pin::Out;
      continue;
    }
    Point p = g.center(c);
    if (norm(p - x0) < eps) {
      pins[c] = Pin::Free;
    } else {
      pins[c] = Pin::In;
      some_outside = true;
    }
  }
  if (!some_outside) throw BallCoversDomain("eps ball covers the whole domain");

  IndicatorSet dummy(g);
  CutProblem cp = build_cut_problem(dom, w, st, dummy, &pins);
  MinimizerPair mp = solve_cut(cp);

  BarrierResult res;
  res.V_star = mp.E_max;  // maximal minimizer
  res.value = mp.value;

  double margin = std::min(margin_cells * g.h, 0.5 * eps);
  const int dirs2[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  const int dirs3[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                           {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  int ndirs = g.dim == 3 ? 6 : 4;
  auto dirs = g.dim == 3 ? &dirs3[0] : &dirs2[0];
  for (int c = 0; c < g.ncells(); ++c) {
    if (!res.V_star.v[c] || !dom.is_boundary(c)) continue;
    bool on_dV = false;
    for (int k = 0; k < ndirs; ++k) {
      int nb = g.shift(c, dirs[k][0], dirs[k][1], dirs[k][2]);
      if (nb < 0 || !res.V_star.v[nb]) {
        on_dV = true;
        break;
      }
    }
    if (on_dV && norm(g.center(c) - x0) < eps - margin)
      res.witness_cells.push_back(c);
  }
  res.pass = res.witness_cells.empty();
  return res;
}

void dump_dimacs(const CutProblem& cp, std::ostream& os) {
  const int n = cp.grid.ncells();
  int pins = 0;
  for (auto p : cp.pin) pins += p != Pin::Free;
  // nodes are 1..n, source n+1, sink n+2; stencil edges appear in both
  // directions as separate arcs
  os << "c weighted perimeter cut problem, capacity scale " << cp.scale << "\n";
  os << "p max " << n + 2 << " " << (cp.edges.size() * 2 + pins) << "\n";
  os << "n " << n + 1 << " s\n";
  os << "n " << n + 2 << " t\n";
  for (int c = 0; c < n; ++c) {
    if (cp.pin[c] == Pin::In)
      os << "a " << n + 1 << " " << c + 1 << " " << cp.pin_cap << "\n";
    else if (cp.pin[c] == Pin::Out)
      os << "a " << c + 1 << " " << n + 2 << " " << cp.pin_cap << "\n";
  }
  for (const auto& e : cp.edges) {
    os << "a " << e.a + 1 << " " << e.b + 1 << " " << e.cap << "\n";
    os << "a " << e.b + 1 << " " << e.a + 1 << " " << e.cap << "\n";
  }
}

}  // namespace wlg
