#include "wlg/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace wlg {

namespace {

const int kDirs2[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
const int kDirs3[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                          {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

template <typename Fn>
void for_each_face_neighbor(const Grid& g, int c, Fn&& fn) {
  int nd = g.dim == 3 ? 6 : 4;
  auto dirs = g.dim == 3 ? &kDirs3[0] : &kDirs2[0];
  for (int k = 0; k < nd; ++k) {
    int nb = g.shift(c, dirs[k][0], dirs[k][1], dirs[k][2]);
    if (nb >= 0) fn(nb);
  }
}

// interior boundary: cells of E inside Omega with a face neighbor outside E
std::vector<int> interior_boundary_cells(const IndicatorSet& E,
                                         const DiscreteDomain& dom) {
  std::vector<int> out;
  for (int c : dom.interior_cells) {
    if (!E.v[c]) continue;
    bool edge = false;
    for_each_face_neighbor(dom.grid, c, [&](int nb) {
      if (!E.v[nb]) edge = true;
    });
    if (edge) out.push_back(c);
  }
  return out;
}

}  // namespace

LevelSetFamily build_family(const DiscreteDomain& dom, const WeightField& w,
                            const CutStencil& st, const BoundaryData& bd,
                            int K) {
  if (K < 1) throw Error("level count must be at least 1");
  LevelSetFamily fam;
  double a = bd.min_value, b = bd.max_value;
  if (a == b) {
    fam.levels = {a};
  } else {
    for (int k = 0; k <= K; ++k)
      fam.levels.push_back(a + (b - a) * (static_cast<double>(k) / K));
  }
  for (double t : fam.levels) {
    IndicatorSet L = superlevel_exterior(dom, bd, t);
    fam.pairs.push_back(solve_star(dom, w, st, L));
  }
  for (size_t k = 0; k + 1 < fam.pairs.size(); ++k) {
    if (!fam.pairs[k + 1].E_max.subset_of(fam.pairs[k].E_max))
      throw NestednessViolation("level " + std::to_string(k + 1) +
                                " is not contained in level " +
                                std::to_string(k));
  }
  return fam;
}

BoundaryValuesReport check_boundary_values(const LevelSetFamily& fam,
                                           const DiscreteDomain& dom,
                                           const BoundaryData& bd, double tol) {
  BoundaryValuesReport rep;
  for (int k = 0; k < fam.num_levels(); ++k) {
    const IndicatorSet& E = fam.rep(k);
    double t = fam.levels[k];
    double level_max = 0.0;
    for (int c : dom.boundary_cells) {
      bool on_dE = false;
      for_each_face_neighbor(dom.grid, c, [&](int nb) {
        if (E.v[nb] != E.v[c]) on_dE = true;
      });
      if (!on_dE) continue;
      double dev = std::abs(bd.g[c] - t);
      level_max = std::max(level_max, dev);
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.witness_level = k;
        rep.witness_cell = c;
      }
    }
    rep.per_level.push_back(level_max);
  }
  rep.pass = rep.max_deviation <= tol;
  if (rep.pass) {
    rep.witness_level = -1;
    rep.witness_cell = -1;
  }
  return rep;
}

SeparationReport check_separation(const LevelSetFamily& fam,
                                  const DiscreteDomain& dom,
                                  const std::vector<double>& plateaus) {
  SeparationReport rep;
  rep.min_distance = std::numeric_limits<double>::infinity();
  const Grid& g = dom.grid;

  std::vector<std::vector<int>> bcells(fam.num_levels());
  for (int k = 0; k < fam.num_levels(); ++k)
    bcells[k] = interior_boundary_cells(fam.rep(k), dom);

  for (int s = 0; s < fam.num_levels(); ++s) {
    for (int t = s + 1; t < fam.num_levels(); ++t) {
      if (fam.levels[s] == fam.levels[t]) {
        ++rep.pairs_exempted;
        continue;  // duplicated level, same set
      }
      bool bracketed = false;
      for (double v : plateaus)
        if (v >= fam.levels[s] && v <= fam.levels[t]) bracketed = true;
      if (bracketed) {
        ++rep.pairs_exempted;
        continue;
      }
      ++rep.pairs_checked;

      std::vector<std::uint8_t> in_s(g.ncells(), 0);
      for (int c : bcells[s]) in_s[c] = 1;
      for (int c : bcells[t]) {
        if (in_s[c]) {
          rep.pass = false;
          rep.witness_s = s;
          rep.witness_t = t;
          rep.witness_cell = c;
        }
      }
      // closest distinct-level boundary cells (reported, not asserted)
      for (int c : bcells[t]) {
        Point pc = g.center(c);
        for (int d : bcells[s]) {
          double dist = norm(pc - g.center(d));
          rep.min_distance = std::min(rep.min_distance, dist);
        }
      }
    }
  }
  if (rep.pairs_checked == 0) rep.min_distance = 0.0;
  return rep;
}

ComponentReport check_component_reaches_boundary(const IndicatorSet& E,
                                                 const DiscreteDomain& dom) {
  require_same_grid(E.grid, dom.grid, "check_component_reaches_boundary");
  const Grid& g = dom.grid;

  // both-sided interface cells inside Omega
  std::vector<std::uint8_t> bmask(g.ncells(), 0);
  for (int c : dom.interior_cells) {
    bool iface = false;
    for_each_face_neighbor(g, c, [&](int nb) {
      if (E.v[nb] != E.v[c]) iface = true;
    });
    if (iface) bmask[c] = 1;
  }

  ComponentReport rep;
  std::vector<int> label(g.ncells(), -1);
  std::deque<int> queue;
  for (int start = 0; start < g.ncells(); ++start) {
    if (!bmask[start] || label[start] >= 0) continue;
    int comp = rep.components++;
    bool reaches = false;
    label[start] = comp;
    queue.push_back(start);
    while (!queue.empty()) {
      int c = queue.front();
      queue.pop_front();
      if (dom.is_boundary(c)) reaches = true;
      for_each_face_neighbor(g, c, [&](int nb) {
        if (dom.is_boundary(nb)) reaches = true;
        if (bmask[nb] && label[nb] < 0) {
          label[nb] = comp;
          queue.push_back(nb);
        }
      });
    }
    if (!reaches && rep.pass) {
      rep.pass = false;
      rep.witness_cell = start;
    }
  }
  return rep;
}

ScalarField assemble_solution(const LevelSetFamily& fam,
                              const DiscreteDomain& dom,
                              const BoundaryData& bd) {
  for (size_t k = 0; k + 1 < fam.pairs.size(); ++k)
    if (!fam.rep(static_cast<int>(k) + 1).subset_of(fam.rep(static_cast<int>(k))))
      throw NestednessViolation("family is not nested");

  ScalarField u(dom.grid, fam.levels.front());
  for (int c : dom.interior_cells) {
    double val = fam.levels.front();
    for (int k = fam.num_levels() - 1; k >= 0; --k) {
      if (fam.rep(k).v[c]) {
        val = fam.levels[k];
        break;  // nested family: the highest containing level
      }
    }
    u.v[c] = val;
  }
  for (int q : dom.collar_cells) u.v[q] = bd.G[q];
  return u;
}

bool superlevel_recovery_exact(const LevelSetFamily& fam,
                               const DiscreteDomain& dom,
                               const ScalarField& u) {
  for (int k = 0; k < fam.num_levels(); ++k) {
    double t = fam.levels[k];
    for (int c : dom.interior_cells) {
      bool in_level = u.v[c] >= t;
      if (in_level != (fam.rep(k).v[c] != 0)) return false;
    }
  }
  return true;
}

double discrete_modulus(const ScalarField& u, const DiscreteDomain& dom) {
  double m = 0.0;
  for (int c : dom.interior_cells) {
    for_each_face_neighbor(dom.grid, c, [&](int nb) {
      if (dom.interior[nb]) m = std::max(m, std::abs(u.v[c] - u.v[nb]));
    });
  }
  return m;
}

}  // namespace wlg
