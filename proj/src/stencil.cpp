#include "wlg/stencil.hpp"

#include <algorithm>
#include <cmath>

namespace wlg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 2D Cauchy-Crofton weight per edge of an offset family: h * dphi / (2 |o|),
// dphi the angular sector owned by the family among the given directions.
std::vector<CutStencil::Offset> crofton_2d(
    const std::vector<std::array<int, 2>>& offs) {
  struct Fam {
    std::array<int, 2> d;
    double angle;
  };
  std::vector<Fam> fams;
  for (auto& o : offs) {
    double a = std::atan2(static_cast<double>(o[1]), static_cast<double>(o[0]));
    while (a < 0) a += kPi;      // directions mod pi
    while (a >= kPi) a -= kPi;
    fams.push_back({o, a});
  }
  std::sort(fams.begin(), fams.end(),
            [](const Fam& a, const Fam& b) { return a.angle < b.angle; });
  int m = static_cast<int>(fams.size());
  std::vector<CutStencil::Offset> out;
  for (int k = 0; k < m; ++k) {
    double prev = fams[(k + m - 1) % m].angle - (k == 0 ? kPi : 0.0);
    double next = fams[(k + 1) % m].angle + (k == m - 1 ? kPi : 0.0);
    double dphi = 0.5 * (next - prev);
    double len = std::hypot(fams[k].d[0], fams[k].d[1]);
    out.push_back({{fams[k].d[0], fams[k].d[1], 0}, dphi / (2.0 * len), len});
  }
  return out;
}

// 3D Crofton weights: h^2 * dOmega / (2 pi |o|), with dOmega the spherical
// measure of directions nearest to the family (mod sign), integrated on a
// fixed Gauss-Legendre x uniform grid. Deterministic by construction.
std::vector<CutStencil::Offset> crofton_3d(
    const std::vector<std::array<int, 3>>& offs) {
  int m = static_cast<int>(offs.size());
  std::vector<std::array<double, 3>> dirs(m);
  std::vector<double> lens(m);
  for (int k = 0; k < m; ++k) {
    double l = std::sqrt(double(offs[k][0]) * offs[k][0] +
                         double(offs[k][1]) * offs[k][1] +
                         double(offs[k][2]) * offs[k][2]);
    lens[k] = l;
    dirs[k] = {offs[k][0] / l, offs[k][1] / l, offs[k][2] / l};
  }
  std::vector<double> area(m, 0.0);
  const int nz = 256, nphi = 512;
  // midpoint rule in cos(theta) and phi; exact enough for weights (~1e-5)
  for (int iz = 0; iz < nz; ++iz) {
    double cz = -1.0 + (iz + 0.5) * (2.0 / nz);
    double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    for (int ip = 0; ip < nphi; ++ip) {
      double phi = (ip + 0.5) * (2.0 * kPi / nphi);
      double x = sz * std::cos(phi), y = sz * std::sin(phi);
      int best = 0;
      double bestdot = -1.0;
      for (int k = 0; k < m; ++k) {
        double d = std::abs(x * dirs[k][0] + y * dirs[k][1] + cz * dirs[k][2]);
        if (d > bestdot) {
          bestdot = d;
          best = k;
        }
      }
      area[best] += (2.0 / nz) * (2.0 * kPi / nphi);
    }
  }
  std::vector<CutStencil::Offset> out;
  for (int k = 0; k < m; ++k)
    out.push_back({offs[k], area[k] / (2.0 * kPi * lens[k]), lens[k]});
  return out;
}

}  // namespace

CutStencil make_stencil(int dim, int neighbors) {
  CutStencil st;
  st.dim = dim;
  st.neighbors = neighbors;
  if (dim == 2) {
    std::vector<std::array<int, 2>> offs;
    if (neighbors == 4) {
      // exact face weight h per cut face: the hand-checkable cut metric
      st.offsets = {{{1, 0, 0}, 1.0, 1.0}, {{0, 1, 0}, 1.0, 1.0}};
      return st;
    } else if (neighbors == 8) {
      offs = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
    } else if (neighbors == 16) {
      offs = {{1, 0}, {0, 1}, {1, 1}, {-1, 1},
              {2, 1}, {1, 2}, {-1, 2}, {-2, 1}};
    } else {
      throw Error("2D stencil must have 4, 8 or 16 neighbors");
    }
    st.offsets = crofton_2d(offs);
    return st;
  }
  if (dim == 3) {
    std::vector<std::array<int, 3>> offs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    if (neighbors == 6) {
      // exact face weight h^2 per cut face
      for (auto& o : offs) st.offsets.push_back({o, 1.0, 1.0});
      return st;
    }
    std::vector<std::array<int, 3>> diag2 = {{1, 1, 0}, {-1, 1, 0}, {1, 0, 1},
                                             {-1, 0, 1}, {0, 1, 1}, {0, -1, 1}};
    offs.insert(offs.end(), diag2.begin(), diag2.end());
    if (neighbors == 26) {
      std::vector<std::array<int, 3>> diag3 = {
          {1, 1, 1}, {-1, 1, 1}, {1, -1, 1}, {-1, -1, 1}};
      offs.insert(offs.end(), diag3.begin(), diag3.end());
    } else if (neighbors != 18) {
      throw Error("3D stencil must have 6, 18 or 26 neighbors");
    }
    st.offsets = crofton_3d(offs);
    return st;
  }
  throw Error("stencil dimension must be 2 or 3");
}

int edge_midpoint_cell(const Grid& grid, int a, const std::array<int, 3>& d) {
  auto c = grid.coords(a);
  int ix[3];
  for (int ax = 0; ax < 3; ++ax) {
    // midpoint coordinate in units of h is (2*c + d + 1) / 2; floor of that
    // is (2*c + d + 1) >> 1 for nonnegative shifted values
    int twice = 2 * c[ax] + d[ax] + 1;
    ix[ax] = twice >= 0 ? twice / 2 : (twice - 1) / 2;
  }
  if (!grid.contains(ix[0], ix[1], ix[2])) return -1;
  return grid.index(ix[0], ix[1], ix[2]);
}

}  // namespace wlg
