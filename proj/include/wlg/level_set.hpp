#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlg/boundary.hpp"
#include "wlg/set_minimizer.hpp"

namespace wlg {

// Nested family of superlevel-set minimizers. The representative per level is
// E_max, the volume-maximal solution, which guarantees nestedness.
struct LevelSetFamily {
  std::vector<double> levels;         // t_0 < ... < t_K
  std::vector<MinimizerPair> pairs;   // one per level
  const IndicatorSet& rep(int k) const { return pairs[k].E_max; }
  int num_levels() const { return static_cast<int>(levels.size()); }
};

// K+1 uniformly spaced levels on [min g, max g]; constant data collapses to a
// single level. Verifies nestedness cell-for-cell.
LevelSetFamily build_family(const DiscreteDomain& dom, const WeightField& w,
                            const CutStencil& st, const BoundaryData& bd,
                            int K);

struct BoundaryValuesReport {
  bool pass = true;
  double max_deviation = 0.0;
  int witness_level = -1;
  int witness_cell = -1;
  std::vector<double> per_level;
};
// For each level t, max |g - t| over dOmega cells on the discrete boundary of
// E_t; passes iff every deviation <= tol.
BoundaryValuesReport check_boundary_values(const LevelSetFamily& fam,
                                           const DiscreteDomain& dom,
                                           const BoundaryData& bd, double tol);

struct SeparationReport {
  bool pass = true;
  int witness_s = -1, witness_t = -1, witness_cell = -1;
  double min_distance = 0.0;  // min center distance between distinct-level boundaries
  int pairs_checked = 0;
  int pairs_exempted = 0;  // plateau-bracketing pairs
};
// Interior boundaries of distinct non-plateau levels must share no cell.
SeparationReport check_separation(const LevelSetFamily& fam,
                                  const DiscreteDomain& dom,
                                  const std::vector<double>& plateaus);

struct ComponentReport {
  bool pass = true;
  int components = 0;
  int witness_cell = -1;  // cell of a floating component
};
// Every face-connected component of the discrete boundary of E inside Omega
// must have a cell on or adjacent to dOmega.
ComponentReport check_component_reaches_boundary(const IndicatorSet& E,
                                                 const DiscreteDomain& dom);

// u*(x) = max{ t_k : x in E_{t_k} } on Omega (default t_0), G on the collar.
// Throws NestednessViolation if the family is not nested.
ScalarField assemble_solution(const LevelSetFamily& fam,
                              const DiscreteDomain& dom,
                              const BoundaryData& bd);

// Exact superlevel recovery: {u >= t_k} n Omega == E_{t_k} n Omega for all k.
bool superlevel_recovery_exact(const LevelSetFamily& fam,
                               const DiscreteDomain& dom,
                               const ScalarField& u);

// max over adjacent interior cell pairs of |u(p) - u(q)|.
double discrete_modulus(const ScalarField& u, const DiscreteDomain& dom);

}  // namespace wlg
