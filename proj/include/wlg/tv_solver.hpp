#pragma once

#include <vector>

#include "wlg/boundary.hpp"
#include "wlg/functionals.hpp"

namespace wlg {

struct PdParams {
  int max_iter = 20000;
  double gap_tol = 1e-4;
  int check_every = 25;
  double step_ratio = 1.0;  // tau = ratio/L, sigma = 1/(ratio*L)
};

struct PdCertificate {
  double primal = 0.0;       // h^n sum a_c |grad u|_2 at the returned iterate
  double dual = 0.0;         // valid lower bound from the box-constrained dual
  double gap = 0.0;          // relative duality gap
  int iterations = 0;
  bool converged = false;
  double feasibility = 0.0;  // max(0, max |Y|-a) at the returned dual iterate
  double best_primal = 0.0;
};

struct PdSolution {
  ScalarField u;
  DiscreteVectorField Y;
  PdCertificate certificate;
};

// Chambolle-Pock on the weighted TV objective with the collar pinned to G.
// Step sizes satisfy tau*sigma*|grad|^2 <= 1 with |grad| estimated by power
// iteration. Weak duality (primal >= dual) holds at every certificate check.
PdSolution solve_dirichlet_tv(const DiscreteDomain& dom, const WeightField& w,
                              const BoundaryData& bd, const PdParams& params);

// Stencil TV over edges with at least one endpoint in Omega; with u = G on
// the collar this is the pinned objective including the boundary mismatch
// penalty across dOmega faces.
double objective_primal(const ScalarField& u, const DiscreteDomain& dom,
                        const WeightField& w, const CutStencil& st);

struct FieldDistance {
  double l1 = 0.0;    // h^n sum |d|
  double l2 = 0.0;    // sqrt(h^n sum d^2)
  double linf = 0.0;
  int argmax_cell = -1;
  double u1_at_argmax = 0.0;
  double u2_at_argmax = 0.0;
};
FieldDistance compare_solutions(const ScalarField& u1, const ScalarField& u2,
                                const CellRegion& region);

// Largest level <= u(c) per cell (values below t_0 snap to t_0); aligns a
// continuous field with a level-set staircase for like-for-like comparison.
ScalarField snap_to_levels(const ScalarField& u,
                           const std::vector<double>& levels);

}  // namespace wlg
