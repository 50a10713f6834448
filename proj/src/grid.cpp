#include "wlg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace wlg {

namespace {

// face-adjacency BFS over a masked cell set
int count_components_face(const Grid& g, const std::vector<std::uint8_t>& mask,
                          std::vector<int>* label_out = nullptr) {
  std::vector<int> label(g.ncells(), -1);
  int ncomp = 0;
  std::deque<int> queue;
  const int dirs2[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  const int dirs3[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                           {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  int ndirs = g.dim == 3 ? 6 : 4;
  auto dirs = g.dim == 3 ? &dirs3[0] : &dirs2[0];
  for (int start = 0; start < g.ncells(); ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    label[start] = ncomp;
    queue.push_back(start);
    while (!queue.empty()) {
      int c = queue.front();
      queue.pop_front();
      for (int k = 0; k < ndirs; ++k) {
        int nb = g.shift(c, dirs[k][0], dirs[k][1], dirs[k][2]);
        if (nb >= 0 && mask[nb] && label[nb] < 0) {
          label[nb] = ncomp;
          queue.push_back(nb);
        }
      }
    }
    ++ncomp;
  }
  if (label_out) *label_out = std::move(label);
  return ncomp;
}

// full (vertex) adjacency BFS: 8 neighbors in 2D, 26 in 3D
int count_components_vertex(const Grid& g,
                            const std::vector<std::uint8_t>& mask) {
  std::vector<int> label(g.ncells(), -1);
  int ncomp = 0;
  std::deque<int> queue;
  int zlo = g.dim == 3 ? -1 : 0, zhi = g.dim == 3 ? 1 : 0;
  for (int start = 0; start < g.ncells(); ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    label[start] = ncomp;
    queue.push_back(start);
    while (!queue.empty()) {
      int c = queue.front();
      queue.pop_front();
      for (int dz = zlo; dz <= zhi; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            int nb = g.shift(c, dx, dy, dz);
            if (nb >= 0 && mask[nb] && label[nb] < 0) {
              label[nb] = ncomp;
              queue.push_back(nb);
            }
          }
    }
    ++ncomp;
  }
  return ncomp;
}

}  // namespace

ShapeSpec shape_disk(double cx, double cy, double r) {
  ShapeSpec s;
  s.dim = 2;
  s.inside = [=](const Point& p) {
    double dx = p[0] - cx, dy = p[1] - cy;
    return dx * dx + dy * dy < r * r;
  };
  s.bbox = {cx - r, cx + r, cy - r, cy + r, 0, 0};
  return s;
}

ShapeSpec shape_rect(double x0, double y0, double x1, double y1) {
  ShapeSpec s;
  s.dim = 2;
  s.inside = [=](const Point& p) {
    return p[0] > x0 && p[0] < x1 && p[1] > y0 && p[1] < y1;
  };
  s.bbox = {x0, x1, y0, y1, 0, 0};
  return s;
}

ShapeSpec shape_annulus(double cx, double cy, double r_in, double r_out) {
  ShapeSpec s;
  s.dim = 2;
  s.inside = [=](const Point& p) {
    double dx = p[0] - cx, dy = p[1] - cy;
    double d2 = dx * dx + dy * dy;
    return d2 > r_in * r_in && d2 < r_out * r_out;
  };
  s.bbox = {cx - r_out, cx + r_out, cy - r_out, cy + r_out, 0, 0};
  return s;
}

ShapeSpec shape_two_disks(double c1x, double c1y, double r1, double c2x,
                          double c2y, double r2) {
  ShapeSpec s;
  s.dim = 2;
  s.inside = [=](const Point& p) {
    double a = (p[0] - c1x) * (p[0] - c1x) + (p[1] - c1y) * (p[1] - c1y);
    double b = (p[0] - c2x) * (p[0] - c2x) + (p[1] - c2y) * (p[1] - c2y);
    return a < r1 * r1 || b < r2 * r2;
  };
  s.bbox = {std::min(c1x - r1, c2x - r2), std::max(c1x + r1, c2x + r2),
            std::min(c1y - r1, c2y - r2), std::max(c1y + r1, c2y + r2), 0, 0};
  return s;
}

ShapeSpec shape_ball(double cx, double cy, double cz, double r) {
  ShapeSpec s;
  s.dim = 3;
  s.inside = [=](const Point& p) {
    double dx = p[0] - cx, dy = p[1] - cy, dz = p[2] - cz;
    return dx * dx + dy * dy + dz * dz < r * r;
  };
  s.bbox = {cx - r, cx + r, cy - r, cy + r, cz - r, cz + r};
  return s;
}

ShapeSpec shape_box(double x0, double y0, double z0, double x1, double y1,
                    double z1) {
  ShapeSpec s;
  s.dim = 3;
  s.inside = [=](const Point& p) {
    return p[0] > x0 && p[0] < x1 && p[1] > y0 && p[1] < y1 && p[2] > z0 &&
           p[2] < z1;
  };
  s.bbox = {x0, x1, y0, y1, z0, z1};
  return s;
}

ShapeSpec shape_from_mask(const std::vector<std::uint8_t>& pixels, int width,
                          int height, double h) {
  ShapeSpec s;
  s.dim = 2;
  auto px = pixels;  // captured copy
  s.inside = [=](const Point& p) {
    int i = static_cast<int>(std::floor(p[0] / h));
    int j = static_cast<int>(std::floor(p[1] / h));
    if (i < 0 || i >= width || j < 0 || j >= height) return false;
    return px[static_cast<size_t>(j) * width + i] != 0;
  };
  s.bbox = {0.0, width * h, 0.0, height * h, 0, 0};
  return s;
}

DiscreteDomain build_domain(const ShapeSpec& shape, double h, int collar_width) {
  DiscreteDomain dom;
  Grid& g = dom.grid;
  g.dim = shape.dim;
  g.h = h;
  dom.collar_width = collar_width;

  for (int ax = 0; ax < g.dim; ++ax) {
    double lo = shape.bbox[2 * ax], hi = shape.bbox[2 * ax + 1];
    int ilo = static_cast<int>(std::floor(lo / h)) - collar_width;
    int ihi = static_cast<int>(std::ceil(hi / h)) + collar_width;
    g.lo[ax] = ilo;
    g.size[ax] = ihi - ilo;
  }
  if (g.dim == 2) {
    g.lo[2] = 0;
    g.size[2] = 1;
  }

  int n = g.ncells();
  dom.interior.assign(n, 0);
  for (int c = 0; c < n; ++c)
    if (shape.inside(g.center(c))) dom.interior[c] = 1;

  for (int c = 0; c < n; ++c)
    if (dom.interior[c]) dom.interior_cells.push_back(c);
  if (dom.interior_cells.empty()) throw EmptyInterior("no interior cells at this spacing");

  if (count_components_face(g, dom.interior) != 1)
    throw DisconnectedInterior("interior is not face-connected");

  // boundary cells: interior cells with a face neighbor outside Omega
  dom.boundary.assign(n, 0);
  const int dirs2[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  const int dirs3[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                           {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  int ndirs = g.dim == 3 ? 6 : 4;
  auto dirs = g.dim == 3 ? &dirs3[0] : &dirs2[0];
  for (int c : dom.interior_cells) {
    for (int k = 0; k < ndirs; ++k) {
      int nb = g.shift(c, dirs[k][0], dirs[k][1], dirs[k][2]);
      if (nb < 0 || !dom.interior[nb]) {
        dom.boundary[c] = 1;
        break;
      }
    }
  }
  for (int c = 0; c < n; ++c) {
    if (dom.boundary[c]) dom.boundary_cells.push_back(c);
    if (!dom.interior[c]) dom.collar_cells.push_back(c);
  }

  // Connected boundary layer. The cell set of a rasterized smooth boundary is
  // vertex-connected but not face-connected (diagonal steps), so connectivity
  // is checked with the full neighborhood; an annulus still fails.
  if (count_components_vertex(g, dom.boundary) != 1)
    throw DisconnectedBoundary("boundary layer is not connected");

  return dom;
}

std::vector<double> boundary_distance(const DiscreteDomain& dom) {
  const Grid& g = dom.grid;
  std::vector<double> dist(g.ncells(), std::numeric_limits<double>::infinity());
  for (int c = 0; c < g.ncells(); ++c) {
    Point p = g.center(c);
    double best = std::numeric_limits<double>::infinity();
    for (int b : dom.boundary_cells) {
      Point q = g.center(b);
      best = std::min(best, norm(p - q));
    }
    dist[c] = best;
  }
  return dist;
}

}  // namespace wlg
