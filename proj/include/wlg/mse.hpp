#pragma once

#include <array>
#include <functional>
#include <vector>

#include "wlg/common.hpp"

namespace wlg {

// Weight a(x', s) on a graph patch, with s-derivatives. Analytic derivatives
// are used when supplied; otherwise central differences with step 1e-5.
struct PatchWeight {
  std::function<double(const Point&, double)> a;
  std::function<double(const Point&, double)> ds;   // optional
  std::function<double(const Point&, double)> dss;  // optional
  double alpha = 1.0;

  double value(const Point& x, double s) const { return a(x, s); }
  double d_s(const Point& x, double s) const;
  double d_ss(const Point& x, double s) const;
};

PatchWeight patch_weight_constant(double c);
PatchWeight patch_weight_exp_s();  // a = e^s
PatchWeight patch_weight_of_x(std::function<double(const Point&)> f,
                              double alpha);

// Uniform node grid over a 1D interval (base_dim 1) or rectangle (base_dim 2).
struct PatchGeometry {
  int base_dim = 1;
  std::array<int, 2> n = {2, 1};  // node counts per axis (n[1] = 1 in 1D)
  double h = 1.0;
  std::array<double, 2> origin = {0.0, 0.0};

  int nodes() const { return n[0] * n[1]; }
  int index(int i, int j = 0) const { return j * n[0] + i; }
  bool is_boundary_node(int i, int j) const {
    if (i == 0 || i == n[0] - 1) return true;
    return base_dim == 2 && (j == 0 || j == n[1] - 1);
  }
  Point node_point(int i, int j = 0) const {
    return {origin[0] + i * h, base_dim == 2 ? origin[1] + j * h : 0.0, 0.0};
  }
  bool operator==(const PatchGeometry& o) const {
    return base_dim == o.base_dim && n == o.n && h == o.h && origin == o.origin;
  }
};

// Height field over a base grid; the graph {(x', u(x'))}.
struct GraphPatch {
  PatchGeometry geo;
  PatchWeight weight;
  std::vector<double> u;

  GraphPatch() = default;
  GraphPatch(const PatchGeometry& g, const PatchWeight& w, double fill = 0.0)
      : geo(g), weight(w), u(g.nodes(), fill) {}
};

// Discrete area functional: face quadrature of a(x',u) sqrt(1+|grad u|^2).
// The residual, weak form, Newton Jacobian and homotopy coefficients below
// are all exact derivatives of this one functional, so integration by parts
// and the stationarity property hold to machine precision.
double patch_functional(const GraphPatch& p);

// Gradient of the functional scaled by 1/h^m: the discrete inhomogeneous
// minimal surface operator -div(a grad u / sqrt(1+|grad u|^2)) +
// d_s a sqrt(1+|grad u|^2). Zero on boundary nodes.
std::vector<double> mse_residual(const GraphPatch& p);

// Directional derivative of the functional toward phi; phi must vanish on the
// patch boundary. Positive values certify supersolutions, negative ones
// subsolutions.
double weak_form(const GraphPatch& p, const std::vector<double>& phi);

// Coefficients of the linearized operator as homotopy integrals between two
// height fields on the same geometry (8-point Gauss-Legendre in t), sampled
// per quadrature element. c^j = -b^j and d = -D by the closed forms.
struct LinearizedCoefficients {
  PatchGeometry geo;
  int m = 1;                // base dimension
  std::vector<double> A;    // elements * m * m, row-major symmetric blocks
  std::vector<double> B;    // elements * m
  std::vector<double> D;    // elements
  double K_observed = 0.0;  // sup |grad u^t| over elements and t-nodes

  int elements() const;
  double a_entry(int el, int i, int j) const { return A[static_cast<size_t>(el) * m * m + i * m + j]; }
  double b_entry(int el, int i) const { return B[static_cast<size_t>(el) * m + i]; }
  double c_entry(int el, int j) const { return -b_entry(el, j); }
  double d_entry(int el) const { return -D[el]; }
};

LinearizedCoefficients homotopy_coefficients(const GraphPatch& p0,
                                             const GraphPatch& p1);

struct EllipticityVerdict {
  bool pass = false;
  double margin = 0.0;  // min eigenvalue minus alpha/(1+K^2)^{3/2}
  int witness_axis = -1;
  int witness_face = -1;
};
// Uniform ellipticity: min eigenvalue of a^{ij} at every face must be at
// least alpha/(1+K^2)^{3/2} - 1e-10; requires K >= K_observed.
EllipticityVerdict ellipticity_certificate(const LinearizedCoefficients& c,
                                           double alpha, double K);

struct MseParams {
  double tol = 1e-10;       // residual max-norm target
  int max_iter = 60;
  int max_halvings = 30;
  bool throw_on_nonconvergence = false;
};

struct MseSolveResult {
  GraphPatch patch;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
};

// Damped Newton on the residual with harmonic initial guess.
MseSolveResult solve_mse_dirichlet(
    const PatchGeometry& geo, const PatchWeight& w,
    const std::function<double(const Point&)>& boundary_values,
    const MseParams& params = {});

// Same solver but starting from and taking boundary values of `init`.
MseSolveResult resolve_patch(const GraphPatch& init, const MseParams& params = {});

// Dense Jacobian of the residual w.r.t. interior nodes (row r, col c over
// interior node ordering); equals the assembled linearized operator from
// homotopy_coefficients(p, p).
std::vector<double> mse_jacobian_dense(const GraphPatch& p,
                                       std::vector<int>* interior_nodes_out);
std::vector<double> assemble_operator_dense(const LinearizedCoefficients& c,
                                            std::vector<int>* interior_nodes_out);

struct ComparisonReport {
  bool pass = false;
  bool ordered = false;
  double min_gap = 0.0;
  int touching_nodes = 0;
  bool touching_agree = true;
  double max_touch_disagreement = 0.0;
};

// Discrete comparison principle: verifies the sub/supersolution hypotheses
// via residual signs, re-solves both fields with their own boundary data,
// checks ordering, and where the graphs touch checks agreement on the 3x3
// neighborhood (the discrete strict maximum principle surrogate).
ComparisonReport comparison_test(const GraphPatch& u_super,
                                 const GraphPatch& u_sub,
                                 double hypothesis_tol = 1e-8);

}  // namespace wlg
