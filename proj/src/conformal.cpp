#include "wlg/conformal.hpp"

#include <cmath>

namespace wlg {

namespace {

constexpr double kPi = 3.14159265358979323846;

using WeightFn = std::function<double(const Point&)>;

struct Accum {
  KahanSum weighted;
  KahanSum riemannian;
};

// Route 1: Euclidean element measure times a 2-point Gauss quadrature of
// a^{(n-1)s/2}. Route 2: 3-point Gauss quadrature of the length element of
// the metric a^s * identity. Distinct rules, so agreement is a real check.
void accumulate_segment(Accum& acc, const Point& p0, const Point& p1,
                        const WeightFn& a, double sigma) {
  Point e = p1 - p0;
  double len = norm(e);
  if (!(len > 0.0)) throw DegenerateElement("zero-length segment");

  static const double g2[2] = {0.5 - 0.5 / std::sqrt(3.0),
                               0.5 + 0.5 / std::sqrt(3.0)};
  double s = 0.0;
  for (double t : g2) {
    Point x = {p0[0] + t * e[0], p0[1] + t * e[1], p0[2] + t * e[2]};
    s += 0.5 * std::pow(a(x), 0.5 * sigma);  // (n-1) = 1
  }
  acc.weighted.add(len * s);

  static const double g3n[3] = {0.5 * (1.0 - std::sqrt(0.6)), 0.5,
                                0.5 * (1.0 + std::sqrt(0.6))};
  static const double g3w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  double r = 0.0;
  for (int q = 0; q < 3; ++q) {
    double t = g3n[q];
    Point x = {p0[0] + t * e[0], p0[1] + t * e[1], p0[2] + t * e[2]};
    double metric = std::pow(a(x), sigma) * (len * len);  // 1x1 Gram
    r += g3w[q] * std::sqrt(metric);
  }
  acc.riemannian.add(r);
}

void accumulate_triangle(Accum& acc, const Point& p0, const Point& p1,
                         const Point& p2, const WeightFn& a, double sigma) {
  Point e1 = p1 - p0, e2 = p2 - p0;
  double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
  double det = g11 * g22 - g12 * g12;
  if (!(det > 0.0)) throw DegenerateElement("degenerate triangle");
  double area = 0.5 * std::sqrt(det);

  auto at = [&](double u, double v) -> Point {
    return {p0[0] + u * e1[0] + v * e2[0], p0[1] + u * e1[1] + v * e2[1],
            p0[2] + u * e1[2] + v * e2[2]};
  };

  // midedge rule (degree 2)
  const double me[3][2] = {{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}};
  double s = 0.0;
  for (auto& q : me) s += std::pow(a(at(q[0], q[1])), sigma) / 3.0;  // (n-1)s/2 = s
  acc.weighted.add(area * s);

  // centroid + interior points (degree 3); sqrt(det of scaled Gram) route
  const double q4[4][3] = {{1.0 / 3.0, 1.0 / 3.0, -27.0 / 48.0},
                           {0.2, 0.2, 25.0 / 48.0},
                           {0.6, 0.2, 25.0 / 48.0},
                           {0.2, 0.6, 25.0 / 48.0}};
  double r = 0.0;
  for (auto& q : q4) {
    double as = std::pow(a(at(q[0], q[1])), sigma);
    double mdet = (as * g11) * (as * g22) - (as * g12) * (as * g12);
    r += q[2] * 0.5 * std::sqrt(mdet);
  }
  acc.riemannian.add(r);
}

}  // namespace

ConformalMass conformal_mass(const Polyline& surface, const WeightFn& a,
                             double sigma) {
  if (sigma == 0.0) throw Error("sigma must be nonzero");
  if (surface.pts.size() < 2) throw DegenerateElement("polyline too short");
  Accum acc;
  size_t n = surface.pts.size();
  size_t nseg = surface.closed ? n : n - 1;
  for (size_t i = 0; i < nseg; ++i) {
    auto& q0 = surface.pts[i];
    auto& q1 = surface.pts[(i + 1) % n];
    accumulate_segment(acc, {q0[0], q0[1], 0.0}, {q1[0], q1[1], 0.0}, a, sigma);
  }
  return {acc.weighted.value(), acc.riemannian.value()};
}

ConformalMass conformal_mass(const TriMesh& surface, const WeightFn& a,
                             double sigma) {
  if (sigma == 0.0) throw Error("sigma must be nonzero");
  Accum acc;
  for (auto& t : surface.tris) {
    auto& v0 = surface.verts[t[0]];
    auto& v1 = surface.verts[t[1]];
    auto& v2 = surface.verts[t[2]];
    accumulate_triangle(acc, {v0[0], v0[1], v0[2]}, {v1[0], v1[1], v1[2]},
                        {v2[0], v2[1], v2[2]}, a, sigma);
  }
  return {acc.weighted.value(), acc.riemannian.value()};
}

Polyline make_circle_polyline(double cx, double cy, double r, int segments) {
  Polyline p;
  p.closed = true;
  p.pts.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    double th = 2.0 * kPi * i / segments;
    p.pts.push_back({cx + r * std::cos(th), cy + r * std::sin(th)});
  }
  return p;
}

namespace {

struct Ico {
  std::vector<std::array<double, 3>> v;
  std::vector<std::array<int, 3>> f;
};

Ico base_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Ico ico;
  ico.v = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
           {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
           {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  ico.f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return ico;
}

std::array<double, 3> to_sphere(const std::array<double, 3>& p, double r) {
  double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return {r * p[0] / n, r * p[1] / n, r * p[2] / n};
}

void subdivide_accumulate(Accum& acc, const std::array<double, 3>& a,
                          const std::array<double, 3>& b,
                          const std::array<double, 3>& c, int depth, double r,
                          const WeightFn& w, double sigma) {
  if (depth == 0) {
    accumulate_triangle(acc, {a[0], a[1], a[2]}, {b[0], b[1], b[2]},
                        {c[0], c[1], c[2]}, w, sigma);
    return;
  }
  auto ab = to_sphere({a[0] + b[0], a[1] + b[1], a[2] + b[2]}, r);
  auto bc = to_sphere({b[0] + c[0], b[1] + c[1], b[2] + c[2]}, r);
  auto ca = to_sphere({c[0] + a[0], c[1] + a[1], c[2] + a[2]}, r);
  subdivide_accumulate(acc, a, ab, ca, depth - 1, r, w, sigma);
  subdivide_accumulate(acc, ab, b, bc, depth - 1, r, w, sigma);
  subdivide_accumulate(acc, ca, bc, c, depth - 1, r, w, sigma);
  subdivide_accumulate(acc, ab, bc, ca, depth - 1, r, w, sigma);
}

}  // namespace

TriMesh make_sphere_mesh(double r, int level) {
  Ico ico = base_icosahedron();
  for (auto& p : ico.v) p = to_sphere(p, r);
  for (int l = 0; l < level; ++l) {
    // midpoint split without dedup; fine for quadrature purposes
    TriMesh next;
    std::vector<std::array<int, 3>> nf;
    std::vector<std::array<double, 3>> nv;
    nv.reserve(ico.f.size() * 6);
    for (auto& f : ico.f) {
      auto a = ico.v[f[0]], b = ico.v[f[1]], c = ico.v[f[2]];
      auto ab = to_sphere({a[0] + b[0], a[1] + b[1], a[2] + b[2]}, r);
      auto bc = to_sphere({b[0] + c[0], b[1] + c[1], b[2] + c[2]}, r);
      auto ca = to_sphere({c[0] + a[0], c[1] + a[1], c[2] + a[2]}, r);
      int base = static_cast<int>(nv.size());
      nv.insert(nv.end(), {a, b, c, ab, bc, ca});
      nf.push_back({base + 0, base + 3, base + 5});
      nf.push_back({base + 3, base + 1, base + 4});
      nf.push_back({base + 5, base + 4, base + 2});
      nf.push_back({base + 3, base + 4, base + 5});
    }
    ico.v = std::move(nv);
    ico.f = std::move(nf);
  }
  return {std::move(ico.v), std::move(ico.f)};
}

ConformalMass conformal_mass_icosphere(double r, int level, const WeightFn& a,
                                       double sigma) {
  if (sigma == 0.0) throw Error("sigma must be nonzero");
  Ico ico = base_icosahedron();
  for (auto& p : ico.v) p = to_sphere(p, r);
  Accum acc;
  for (auto& f : ico.f)
    subdivide_accumulate(acc, ico.v[f[0]], ico.v[f[1]], ico.v[f[2]], level, r,
                         a, sigma);
  return {acc.weighted.value(), acc.riemannian.value()};
}

}  // namespace wlg
