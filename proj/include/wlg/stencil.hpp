#pragma once

#include <array>
#include <vector>

#include "wlg/grid.hpp"

namespace wlg {

// Neighborhood system with per-offset cut weights. Only one representative of
// each {+o,-o} pair is stored; the full stencil is symmetric under negation by
// construction. `coef` is dimensionless: the physical edge weight is
// coef * h^(dim-1), so for the 2D 4-neighborhood a cut face costs exactly h.
// Multi-neighborhood coefficients are Cauchy-Crofton weights, which make the
// cut metric approximate the Euclidean (n-1)-measure instead of the
// axis-aligned one.
struct CutStencil {
  int dim = 2;
  int neighbors = 4;  // 4/8/16 in 2D, 6/18/26 in 3D
  struct Offset {
    std::array<int, 3> d;
    double coef;
    double len;  // |d|_2
  };
  std::vector<Offset> offsets;

  int radius() const {
    int r = 0;
    for (auto& o : offsets)
      for (int ax = 0; ax < 3; ++ax) r = std::max(r, std::abs(o.d[ax]));
    return r;
  }
  double weight(const Grid& g, int k) const {
    return offsets[k].coef * g.face_area();
  }
};

CutStencil make_stencil(int dim, int neighbors);

// Cell of the box containing the midpoint of edge (a, a+d); half-open cells,
// so midpoints on a cell boundary round toward +infinity on that axis. Returns
// -1 when the midpoint cell falls outside the box (cannot happen for in-box
// edges). Used to attribute edges to cell regions.
int edge_midpoint_cell(const Grid& grid, int a, const std::array<int, 3>& d);

}  // namespace wlg
