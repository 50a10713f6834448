#pragma once

#include <array>
#include <functional>
#include <vector>

#include "wlg/common.hpp"

namespace wlg {

struct Polyline {
  std::vector<std::array<double, 2>> pts;
  bool closed = true;
};

struct TriMesh {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<int, 3>> tris;
};

struct ConformalMass {
  double weighted_area;    // quadrature of a^{(n-1)s/2} dH^{n-1}
  double riemannian_area;  // hypersurface area in the metric a^s * identity
};

// The two values are computed by independent routes (direct weighted measure
// vs Gram determinant of the scaled metric, with different quadrature rules)
// and agree up to quadrature error on refined surfaces.
ConformalMass conformal_mass(const Polyline& surface,
                             const std::function<double(const Point&)>& a,
                             double sigma);
ConformalMass conformal_mass(const TriMesh& surface,
                             const std::function<double(const Point&)>& a,
                             double sigma);

Polyline make_circle_polyline(double cx, double cy, double r, int segments);
// icosphere with `level` subdivision steps, vertices on the sphere
TriMesh make_sphere_mesh(double r, int level);

// Streams an icosphere of the given subdivision level through the same two
// quadrature routes without materializing the mesh; O(level) memory.
ConformalMass conformal_mass_icosphere(
    double r, int level, const std::function<double(const Point&)>& a,
    double sigma);

}  // namespace wlg
