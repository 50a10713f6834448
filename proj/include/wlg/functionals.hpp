#pragma once

#include <array>
#include <vector>

#include "wlg/fields.hpp"
#include "wlg/stencil.hpp"
#include "wlg/weight.hpp"

namespace wlg {

// Weighted perimeter of E inside `region`: sum over cut stencil edges whose
// midpoint cell lies in the region of a_f * crofton_weight.
double alpha_perimeter(const IndicatorSet& E, const CellRegion& region,
                       const WeightField& w, const CutStencil& st);

// Weighted total variation with the same edge set and weights, so the layer
// cake identity with alpha_perimeter is exact.
double alpha_total_variation(const ScalarField& u, const CellRegion& region,
                             const WeightField& w, const CutStencil& st);

struct CoareaResult {
  double tv_value;
  double coarea_value;
  int levels_used;
};
// Exact layer-cake quadrature: thresholds at midpoints between consecutive
// distinct values of u, weighted by the value gaps.
CoareaResult coarea_quadrature(const ScalarField& u, const CellRegion& region,
                               const WeightField& w, const CutStencil& st);

// P(E1) + P(E2) - P(E1 u E2) - P(E1 n E2); nonnegative in exact arithmetic.
double submodularity_defect(const IndicatorSet& E1, const IndicatorSet& E2,
                            const CellRegion& region, const WeightField& w,
                            const CutStencil& st);

// One vector per cell; the discrete dual field.
struct DiscreteVectorField {
  Grid grid;
  int dim;
  std::vector<double> comp;  // ncells * dim, axis-major per cell

  DiscreteVectorField() = default;
  explicit DiscreteVectorField(const Grid& g)
      : grid(g), dim(g.dim), comp(static_cast<size_t>(g.ncells()) * g.dim, 0.0) {}
  double& at(int cell, int ax) { return comp[static_cast<size_t>(cell) * dim + ax]; }
  double at(int cell, int ax) const { return comp[static_cast<size_t>(cell) * dim + ax]; }
};

struct DualPairing {
  double pairing;
  double feasibility_violation;
};
// pairing = h^n sum u * div_h Y with div_h the exact negative adjoint of the
// forward-difference gradient; violation = max(0, max_cells(|Y| - a)).
DualPairing dual_pairing_and_gap(const ScalarField& u,
                                 const DiscreteVectorField& Y,
                                 const WeightField& w);

// Isotropic two-point total variation h^n sum_c a_c |grad+ u(c)|_2; the primal
// functional the dual pairing is in exact weak duality with.
double pointwise_total_variation(const ScalarField& u, const WeightField& w);

}  // namespace wlg
