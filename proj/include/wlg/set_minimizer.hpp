#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wlg/boundary.hpp"
#include "wlg/fields.hpp"
#include "wlg/functionals.hpp"
#include "wlg/stencil.hpp"

namespace wlg {

enum class Pin : std::uint8_t { Free = 0, In = 1, Out = 2 };

// Grid-graph cut instance. Capacities are the stencil edge weights a_f * w_k
// scaled to integers by a power of two chosen from the total finite capacity,
// so the solver, the exhaustive oracle and the lattice arguments all operate
// on identical exact integers. Pinned cells carry a terminal capacity larger
// than the sum of all finite capacities, hence never cut.
struct CutProblem {
  Grid grid;
  std::vector<Pin> pin;
  struct Edge {
    int a, b;
    std::int64_t cap;
  };
  std::vector<Edge> edges;
  double scale = 1.0;  // capacity_int = round(capacity * scale)
  std::int64_t pin_cap = 0;

  double value_of(const IndicatorSet& E) const;      // cut value, double
  std::int64_t value_int_of(const IndicatorSet& E) const;  // exact cut value
};

CutProblem build_cut_problem(const DiscreteDomain& dom, const WeightField& w,
                             const CutStencil& st, const IndicatorSet& exterior,
                             const std::vector<Pin>* pin_override = nullptr);

struct MinimizerPair {
  IndicatorSet E_min;
  IndicatorSet E_max;
  double value = 0.0;
  std::int64_t value_int = 0;
  double scale = 1.0;
};

// Solves the constrained perimeter problem by min-cut. E_min is the residual
// source side, E_max the complement of the sink-reaching side: the unique
// inclusion-minimal and inclusion-maximal optimal sets (lattice property of
// min cuts). E_max realizes the volume-maximal selection.
MinimizerPair solve_cut(const CutProblem& cp);

MinimizerPair solve_star(const DiscreteDomain& dom, const WeightField& w,
                         const CutStencil& st, const IndicatorSet& L_t);

// Brute-force oracle: enumerates all 2^|Omega| subsets (|Omega| <= 20).
// E_max / E_min are the union / intersection of all optimal sets, verified
// optimal. Matches solve_star exactly on the integer capacities.
MinimizerPair exhaustive_min(const DiscreteDomain& dom, const WeightField& w,
                             const CutStencil& st, const IndicatorSet& L_t);

// All optimal sets of a tiny instance (used to exercise the lattice property).
std::vector<IndicatorSet> exhaustive_optima(const DiscreteDomain& dom,
                                            const WeightField& w,
                                            const CutStencil& st,
                                            const IndicatorSet& L_t,
                                            size_t max_count = 4096);

struct MinimalityVerdict {
  bool pass = true;
  int witness_cell = -1;          // a cell of the improving patch
  double improvement = 0.0;       // perimeter decrease found
};

// Checks that no modification of E inside any r-cell patch compactly
// contained in U lowers the perimeter over U: exhaustive flips while
// 2^(patch cells) stays small, per-patch min-cut re-solve otherwise.
MinimalityVerdict local_minimality_check(const IndicatorSet& E,
                                         const CellRegion& U,
                                         const DiscreteDomain& dom,
                                         const WeightField& w,
                                         const CutStencil& st, int radius);

struct BarrierResult {
  bool pass = false;
  IndicatorSet V_star;
  std::vector<int> witness_cells;  // boundary cells of V* on dOmega inside the ball
  double value = 0.0;
};

// Discrete barrier condition at boundary cell x0 with radius eps: solves
// inf{ P_a(W) : W subset Omega, Omega\W inside B_eps(x0) } by min-cut, takes
// the maximal minimizer V*, and passes iff no cell of dV* is a dOmega cell at
// distance < eps - margin_cells*h from x0. The margin accounts for the cut
// merging into dOmega within a cell-scale neighborhood of the ball sphere.
BarrierResult barrier_check(const DiscreteDomain& dom, const WeightField& w,
                            const CutStencil& st, int x0_cell, double eps,
                            double margin_cells = 4.0);

void dump_dimacs(const CutProblem& cp, std::ostream& os);

}  // namespace wlg
