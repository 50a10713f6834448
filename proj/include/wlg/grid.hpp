#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wlg/common.hpp"

namespace wlg {

// Regular cell lattice. Cell (i,j,k) covers [i*h,(i+1)*h) x ... in absolute
// coordinates; `lo` holds the integer coordinates of the first cell. Linear
// indices run x-fastest (z,y,x lexicographic), which fixes the deterministic
// cell ordering used everywhere.
struct Grid {
  int dim = 2;
  double h = 1.0;
  std::array<int, 3> lo = {0, 0, 0};
  std::array<int, 3> size = {0, 0, 1};

  int ncells() const { return size[0] * size[1] * size[2]; }

  int index(int ix, int iy, int iz = 0) const {
    return (iz * size[1] + iy) * size[0] + ix;
  }
  std::array<int, 3> coords(int idx) const {
    int ix = idx % size[0];
    int t = idx / size[0];
    return {ix, t % size[1], t / size[1]};
  }
  bool contains(int ix, int iy, int iz) const {
    return ix >= 0 && ix < size[0] && iy >= 0 && iy < size[1] && iz >= 0 &&
           iz < size[2];
  }
  // neighbor cell index or -1 when the offset leaves the box
  int shift(int idx, int dx, int dy, int dz) const {
    auto c = coords(idx);
    int ix = c[0] + dx, iy = c[1] + dy, iz = c[2] + dz;
    return contains(ix, iy, iz) ? index(ix, iy, iz) : -1;
  }
  Point center(int idx) const {
    auto c = coords(idx);
    return {(lo[0] + c[0] + 0.5) * h, (lo[1] + c[1] + 0.5) * h,
            dim == 3 ? (lo[2] + c[2] + 0.5) * h : 0.0};
  }
  double cell_volume() const { return dim == 3 ? h * h * h : h * h; }
  double face_area() const { return dim == 3 ? h * h : h; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && h == o.h && lo == o.lo && size == o.size;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline void require_same_grid(const Grid& a, const Grid& b,
                              const char* what) {
  if (a != b) throw DomainMismatch(std::string(what) + ": grids differ");
}

// Interior mask plus its derived structure. All cells of the bounding box are
// either interior (Omega) or collar; the collar margin beyond Omega's bounding
// box is `collar_width` cells wide.
struct DiscreteDomain {
  Grid grid;
  int collar_width = 4;
  std::vector<std::uint8_t> interior;  // 1 iff cell in Omega
  std::vector<std::uint8_t> boundary;  // 1 iff Omega cell with a face neighbor outside
  std::vector<int> interior_cells;
  std::vector<int> boundary_cells;
  std::vector<int> collar_cells;

  bool is_interior(int idx) const { return interior[idx] != 0; }
  bool is_boundary(int idx) const { return boundary[idx] != 0; }
  bool is_collar(int idx) const { return interior[idx] == 0; }
};

// Geometric description of the interior region; `inside` is evaluated at cell
// centers. bbox = {xmin,xmax,ymin,ymax,zmin,zmax} (z ignored in 2D).
struct ShapeSpec {
  int dim = 2;
  std::function<bool(const Point&)> inside;
  std::array<double, 6> bbox = {0, 0, 0, 0, 0, 0};
};

ShapeSpec shape_disk(double cx, double cy, double r);
ShapeSpec shape_rect(double x0, double y0, double x1, double y1);
ShapeSpec shape_annulus(double cx, double cy, double r_in, double r_out);
ShapeSpec shape_two_disks(double c1x, double c1y, double r1, double c2x,
                          double c2y, double r2);
ShapeSpec shape_ball(double cx, double cy, double cz, double r);
ShapeSpec shape_box(double x0, double y0, double z0, double x1, double y1,
                    double z1);
// pixels > 0 are interior; pixel (col,row) maps to cell (col,row) at spacing h
ShapeSpec shape_from_mask(const std::vector<std::uint8_t>& pixels, int width,
                          int height, double h);

DiscreteDomain build_domain(const ShapeSpec& shape, double h, int collar_width);

// distance from a cell center to the nearest boundary-cell center
std::vector<double> boundary_distance(const DiscreteDomain& dom);

}  // namespace wlg
