#include "wlg/mse.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace wlg {

namespace {

// 8-point Gauss-Legendre on [0,1]
const double kGlNodes[8] = {0.01985507175123188, 0.10166676129318664,
                            0.2372337950418355,  0.40828267875217505,
                            0.5917173212478249,  0.7627662049581645,
                            0.8983332387068134,  0.9801449282487681};
const double kGlWeights[8] = {0.05061426814518813, 0.11119051722668723,
                              0.15685332293894364, 0.18134189168918099,
                              0.18134189168918099, 0.15685332293894364,
                              0.11119051722668723, 0.05061426814518813};

struct NodeCoef {
  int node;
  double c_s;                  // d sbar / d u_node
  std::array<double, 2> c_p;  // d p_ax / d u_node
};

// One quadrature element: the dual cell spanned by 2^m neighboring nodes,
// with the midpoint slope per axis and the corner-average height. Exact on
// affine fields, so planes are discrete solutions everywhere.
struct ElementStencil {
  Point x;  // element center in base coordinates
  std::array<NodeCoef, 4> nodes;
  int n_nodes;
};

ElementStencil element_stencil(const PatchGeometry& geo, int i, int j) {
  ElementStencil es;
  const double h = geo.h;
  if (geo.base_dim == 1) {
    es.n_nodes = 2;
    es.x = {geo.origin[0] + (i + 0.5) * h, 0.0, 0.0};
    es.nodes[0] = {geo.index(i, 0), 0.5, {-1.0 / h, 0.0}};
    es.nodes[1] = {geo.index(i + 1, 0), 0.5, {1.0 / h, 0.0}};
    return es;
  }
  es.n_nodes = 4;
  es.x = {geo.origin[0] + (i + 0.5) * h, geo.origin[1] + (j + 0.5) * h, 0.0};
  const double q = 0.25;
  const double g = 1.0 / (2.0 * h);
  es.nodes[0] = {geo.index(i, j), q, {-g, -g}};
  es.nodes[1] = {geo.index(i + 1, j), q, {g, -g}};
  es.nodes[2] = {geo.index(i, j + 1), q, {-g, g}};
  es.nodes[3] = {geo.index(i + 1, j + 1), q, {g, g}};
  return es;
}

template <typename Fn>
void for_each_element(const PatchGeometry& geo, Fn&& fn) {
  int ni = geo.n[0] - 1;
  int nj = geo.base_dim == 2 ? geo.n[1] - 1 : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) fn(i, j, j * ni + i);
}

int element_count(const PatchGeometry& geo) {
  return (geo.n[0] - 1) * (geo.base_dim == 2 ? geo.n[1] - 1 : 1);
}

struct ElemState {
  double sbar;
  std::array<double, 2> p;
};

ElemState elem_state(const ElementStencil& es, const std::vector<double>& u) {
  ElemState st{0.0, {0.0, 0.0}};
  for (int k = 0; k < es.n_nodes; ++k) {
    const auto& e = es.nodes[k];
    st.sbar += e.c_s * u[e.node];
    st.p[0] += e.c_p[0] * u[e.node];
    st.p[1] += e.c_p[1] * u[e.node];
  }
  return st;
}

// derivatives of F(x, s, p) = a(x,s) sqrt(1+|p|^2) at an element state
struct FDerivs {
  double F;
  double Fs;
  std::array<double, 2> Fp;
  double Fss;
  std::array<double, 2> Fsp;
  std::array<std::array<double, 2>, 2> Fpp;
};

FDerivs f_derivs(const PatchWeight& w, const Point& x, const ElemState& st,
                 bool second) {
  FDerivs d{};
  double p2 = st.p[0] * st.p[0] + st.p[1] * st.p[1];
  double q = std::sqrt(1.0 + p2);
  double a = w.value(x, st.sbar);
  double as = w.d_s(x, st.sbar);
  d.F = a * q;
  d.Fs = as * q;
  d.Fp = {a * st.p[0] / q, a * st.p[1] / q};
  if (second) {
    double ass = w.d_ss(x, st.sbar);
    double q3 = q * q * q;
    d.Fss = ass * q;
    d.Fsp = {as * st.p[0] / q, as * st.p[1] / q};
    d.Fpp[0][0] = a * (q * q - st.p[0] * st.p[0]) / q3;
    d.Fpp[0][1] = a * (-st.p[0] * st.p[1]) / q3;
    d.Fpp[1][0] = d.Fpp[0][1];
    d.Fpp[1][1] = a * (q * q - st.p[1] * st.p[1]) / q3;
  }
  return d;
}

double element_volume(const PatchGeometry& geo) {
  return geo.base_dim == 2 ? geo.h * geo.h : geo.h;
}

std::vector<int> interior_nodes(const PatchGeometry& geo) {
  std::vector<int> out;
  int nj = geo.base_dim == 2 ? geo.n[1] : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < geo.n[0]; ++i)
      if (!geo.is_boundary_node(i, j)) out.push_back(geo.index(i, j));
  return out;
}

}  // namespace

double PatchWeight::d_s(const Point& x, double s) const {
  if (ds) return ds(x, s);
  const double e = 1e-5;
  return (a(x, s + e) - a(x, s - e)) / (2 * e);
}

double PatchWeight::d_ss(const Point& x, double s) const {
  if (dss) return dss(x, s);
  const double e = 1e-5;
  return (a(x, s + e) - 2 * a(x, s) + a(x, s - e)) / (e * e);
}

PatchWeight patch_weight_constant(double c) {
  PatchWeight w;
  w.a = [c](const Point&, double) { return c; };
  w.ds = [](const Point&, double) { return 0.0; };
  w.dss = [](const Point&, double) { return 0.0; };
  w.alpha = c;
  return w;
}

PatchWeight patch_weight_exp_s() {
  PatchWeight w;
  w.a = [](const Point&, double s) { return std::exp(s); };
  w.ds = w.a;
  w.dss = w.a;
  w.alpha = 0.0;  // caller supplies the range-specific bound when needed
  return w;
}

PatchWeight patch_weight_of_x(std::function<double(const Point&)> f,
                              double alpha) {
  PatchWeight w;
  auto fn = std::move(f);
  w.a = [fn](const Point& x, double) { return fn(x); };
  w.ds = [](const Point&, double) { return 0.0; };
  w.dss = [](const Point&, double) { return 0.0; };
  w.alpha = alpha;
  return w;
}

double patch_functional(const GraphPatch& p) {
  KahanSum sum;
  double vol = element_volume(p.geo);
  for_each_element(p.geo, [&](int i, int j, int) {
    ElementStencil es = element_stencil(p.geo, i, j);
    ElemState st = elem_state(es, p.u);
    sum.add(vol * f_derivs(p.weight, es.x, st, false).F);
  });
  return sum.value();
}

std::vector<double> mse_residual(const GraphPatch& p) {
  std::vector<double> r(p.geo.nodes(), 0.0);
  for_each_element(p.geo, [&](int i, int j, int) {
    ElementStencil es = element_stencil(p.geo, i, j);
    ElemState st = elem_state(es, p.u);
    FDerivs d = f_derivs(p.weight, es.x, st, false);
    for (int k = 0; k < es.n_nodes; ++k) {
      const auto& e = es.nodes[k];
      r[e.node] += d.Fs * e.c_s + d.Fp[0] * e.c_p[0] + d.Fp[1] * e.c_p[1];
    }
  });
  int nj = p.geo.base_dim == 2 ? p.geo.n[1] : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < p.geo.n[0]; ++i)
      if (p.geo.is_boundary_node(i, j)) r[p.geo.index(i, j)] = 0.0;
  return r;
}

double weak_form(const GraphPatch& p, const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != p.geo.nodes())
    throw Error("test field size mismatch");
  int nj = p.geo.base_dim == 2 ? p.geo.n[1] : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < p.geo.n[0]; ++i)
      if (p.geo.is_boundary_node(i, j) && phi[p.geo.index(i, j)] != 0.0)
        throw TestFunctionNotCompactlySupported(
            "test field must vanish on the patch boundary");

  // directional derivative of the element functional toward phi: the
  // quadrature of a grad u . grad phi / sqrt(1+|grad u|^2)
  //                 + d_s a sqrt(1+|grad u|^2) phi
  KahanSum sum;
  double vol = element_volume(p.geo);
  for_each_element(p.geo, [&](int i, int j, int) {
    ElementStencil es = element_stencil(p.geo, i, j);
    ElemState st = elem_state(es, p.u);
    ElemState ph = elem_state(es, phi);
    FDerivs d = f_derivs(p.weight, es.x, st, false);
    sum.add(vol * (d.Fs * ph.sbar + d.Fp[0] * ph.p[0] + d.Fp[1] * ph.p[1]));
  });
  return sum.value();
}

int LinearizedCoefficients::elements() const { return element_count(geo); }

LinearizedCoefficients homotopy_coefficients(const GraphPatch& p0,
                                             const GraphPatch& p1) {
  if (!(p0.geo == p1.geo)) throw DomainMismatch("patch geometries differ");
  LinearizedCoefficients co;
  co.geo = p0.geo;
  co.m = p0.geo.base_dim;
  const int m = co.m;
  const int nel = element_count(p0.geo);
  co.A.assign(static_cast<size_t>(nel) * m * m, 0.0);
  co.B.assign(static_cast<size_t>(nel) * m, 0.0);
  co.D.assign(nel, 0.0);

  double K = 0.0;
  for_each_element(p0.geo, [&](int i, int j, int el) {
    ElementStencil es = element_stencil(p0.geo, i, j);
    ElemState s0 = elem_state(es, p0.u);
    ElemState s1 = elem_state(es, p1.u);
    double Aacc[4] = {0, 0, 0, 0}, Bacc[2] = {0, 0}, Dacc = 0;
    for (int qd = 0; qd < 8; ++qd) {
      double t = kGlNodes[qd], wq = kGlWeights[qd];
      ElemState st{s0.sbar + t * (s1.sbar - s0.sbar),
                   {s0.p[0] + t * (s1.p[0] - s0.p[0]),
                    s0.p[1] + t * (s1.p[1] - s0.p[1])}};
      K = std::max(K, std::sqrt(st.p[0] * st.p[0] + st.p[1] * st.p[1]));
      FDerivs d = f_derivs(p0.weight, es.x, st, true);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) Aacc[r * m + c] += wq * d.Fpp[r][c];
        Bacc[r] += wq * d.Fsp[r];
      }
      Dacc += wq * d.Fss;
    }
    for (int e = 0; e < m * m; ++e)
      co.A[static_cast<size_t>(el) * m * m + e] = Aacc[e];
    for (int e = 0; e < m; ++e)
      co.B[static_cast<size_t>(el) * m + e] = Bacc[e];
    co.D[el] = Dacc;
  });
  co.K_observed = K;
  return co;
}

EllipticityVerdict ellipticity_certificate(const LinearizedCoefficients& c,
                                           double alpha, double K) {
  EllipticityVerdict v;
  if (K + 1e-12 < c.K_observed) {
    v.pass = false;
    v.margin = c.K_observed - K;
    return v;
  }
  double bound = alpha / std::pow(1.0 + K * K, 1.5);
  double min_margin = std::numeric_limits<double>::infinity();
  for (int f = 0; f < c.elements(); ++f) {
    double lmin;
    if (c.m == 1) {
      lmin = c.a_entry(f, 0, 0);
    } else {
      double a = c.a_entry(f, 0, 0), b = c.a_entry(f, 0, 1);
      double d = c.a_entry(f, 1, 1);
      lmin = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    }
    double margin = lmin - bound;
    if (margin < min_margin) {
      min_margin = margin;
      v.witness_face = f;
    }
  }
  v.margin = min_margin;
  v.pass = min_margin >= -1e-10;
  if (v.pass) v.witness_face = -1;
  return v;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Hessian of the element functional over interior nodes, divided by h^m so it
// is the Jacobian of the residual.
SpMat hessian_interior(const GraphPatch& p, const std::vector<int>& inodes) {
  const PatchGeometry& geo = p.geo;
  std::vector<int> pos(geo.nodes(), -1);
  for (size_t k = 0; k < inodes.size(); ++k) pos[inodes[k]] = static_cast<int>(k);

  std::vector<Triplet> trips;
  for_each_element(geo, [&](int i, int j, int) {
    ElementStencil es = element_stencil(geo, i, j);
    ElemState st = elem_state(es, p.u);
    FDerivs d = f_derivs(p.weight, es.x, st, true);
    for (int kr = 0; kr < es.n_nodes; ++kr) {
      const auto& er = es.nodes[kr];
      int r = pos[er.node];
      if (r < 0) continue;
      for (int kc = 0; kc < es.n_nodes; ++kc) {
        const auto& ec = es.nodes[kc];
        int c = pos[ec.node];
        if (c < 0) continue;
        double val = d.Fss * er.c_s * ec.c_s;
        for (int ax = 0; ax < 2; ++ax)
          val += d.Fsp[ax] * (er.c_s * ec.c_p[ax] + er.c_p[ax] * ec.c_s);
        for (int ar = 0; ar < 2; ++ar)
          for (int ac = 0; ac < 2; ++ac)
            val += d.Fpp[ar][ac] * er.c_p[ar] * ec.c_p[ac];
        if (val != 0.0) trips.emplace_back(r, c, val);
      }
    }
  });
  SpMat H(static_cast<int>(inodes.size()), static_cast<int>(inodes.size()));
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

std::vector<double> harmonic_fill(const PatchGeometry& geo,
                                  const std::vector<double>& boundary_u) {
  auto inodes = interior_nodes(geo);
  std::vector<int> pos(geo.nodes(), -1);
  for (size_t k = 0; k < inodes.size(); ++k) pos[inodes[k]] = static_cast<int>(k);

  std::vector<double> u = boundary_u;
  if (inodes.empty()) return u;

  std::vector<Triplet> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(inodes.size());
  int nj = geo.base_dim == 2 ? geo.n[1] : 1;
  for (size_t k = 0; k < inodes.size(); ++k) {
    int node = inodes[k];
    int i = node % geo.n[0], j = node / geo.n[0];
    double diag = 0.0;
    auto link = [&](int ii, int jj) {
      if (ii < 0 || ii >= geo.n[0] || jj < 0 || jj >= nj) return;
      int nb = geo.index(ii, jj);
      diag += 1.0;
      if (pos[nb] >= 0)
        trips.emplace_back(static_cast<int>(k), pos[nb], -1.0);
      else
        rhs[k] += u[nb];
    };
    link(i - 1, j);
    link(i + 1, j);
    if (geo.base_dim == 2) {
      link(i, j - 1);
      link(i, j + 1);
    }
    trips.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
  }
  SpMat A(static_cast<int>(inodes.size()), static_cast<int>(inodes.size()));
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<SpMat> lu(A);
  if (lu.info() != Eigen::Success) throw SingularJacobian("harmonic fill failed");
  Eigen::VectorXd x = lu.solve(rhs);
  for (size_t k = 0; k < inodes.size(); ++k) u[inodes[k]] = x[k];
  return u;
}

MseSolveResult newton_solve(GraphPatch p, const MseParams& params) {
  auto inodes = interior_nodes(p.geo);
  MseSolveResult res;

  auto resnorm = [&](const std::vector<double>& r) {
    double m = 0.0;
    for (int n : inodes) m = std::max(m, std::abs(r[n]));
    return m;
  };

  std::vector<double> r = mse_residual(p);
  double rn = resnorm(r);
  int it = 0;
  while (rn > params.tol && it < params.max_iter) {
    SpMat H = hessian_interior(p, inodes);
    Eigen::VectorXd rhs(inodes.size());
    for (size_t k = 0; k < inodes.size(); ++k) rhs[k] = -r[inodes[k]];
    Eigen::SparseLU<SpMat> lu(H);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("Newton system is singular");
    Eigen::VectorXd delta = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("Newton solve failed");

    double step = 1.0;
    GraphPatch trial = p;
    double new_rn = rn;
    for (int halve = 0; halve <= params.max_halvings; ++halve) {
      for (size_t k = 0; k < inodes.size(); ++k)
        trial.u[inodes[k]] = p.u[inodes[k]] + step * delta[k];
      std::vector<double> rt = mse_residual(trial);
      new_rn = resnorm(rt);
      if (new_rn < rn) {
        p = trial;
        r = std::move(rt);
        break;
      }
      step *= 0.5;
    }
    if (!(new_rn < rn)) break;  // damping exhausted
    rn = new_rn;
    ++it;
  }

  res.patch = std::move(p);
  res.converged = rn <= params.tol;
  res.iterations = it;
  res.residual_norm = rn;
  if (!res.converged && params.throw_on_nonconvergence)
    throw NonConvergence("Newton residual " + std::to_string(rn));
  return res;
}

}  // namespace

MseSolveResult solve_mse_dirichlet(
    const PatchGeometry& geo, const PatchWeight& w,
    const std::function<double(const Point&)>& boundary_values,
    const MseParams& params) {
  GraphPatch p(geo, w);
  int nj = geo.base_dim == 2 ? geo.n[1] : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < geo.n[0]; ++i) {
      if (!geo.is_boundary_node(i, j)) continue;
      double v = boundary_values(geo.node_point(i, j));
      if (!std::isfinite(v)) throw Error("boundary values must be finite");
      p.u[geo.index(i, j)] = v;
    }
  p.u = harmonic_fill(geo, p.u);
  return newton_solve(std::move(p), params);
}

MseSolveResult resolve_patch(const GraphPatch& init, const MseParams& params) {
  return newton_solve(init, params);
}

std::vector<double> mse_jacobian_dense(const GraphPatch& p,
                                       std::vector<int>* interior_nodes_out) {
  auto inodes = interior_nodes(p.geo);
  SpMat H = hessian_interior(p, inodes);
  size_t n = inodes.size();
  std::vector<double> dense(n * n, 0.0);
  for (int k = 0; k < H.outerSize(); ++k)
    for (SpMat::InnerIterator it(H, k); it; ++it)
      dense[static_cast<size_t>(it.row()) * n + it.col()] = it.value();
  if (interior_nodes_out) *interior_nodes_out = inodes;
  return dense;
}

std::vector<double> assemble_operator_dense(const LinearizedCoefficients& co,
                                            std::vector<int>* interior_nodes_out) {
  const PatchGeometry& geo = co.geo;
  auto inodes = interior_nodes(geo);
  std::vector<int> pos(geo.nodes(), -1);
  for (size_t k = 0; k < inodes.size(); ++k) pos[inodes[k]] = static_cast<int>(k);

  size_t n = inodes.size();
  std::vector<double> dense(n * n, 0.0);
  const int m = co.m;
  for_each_element(geo, [&](int i, int j, int el) {
    ElementStencil es = element_stencil(geo, i, j);
    double A[2][2] = {{co.a_entry(el, 0, 0), 0}, {0, 0}};
    double B[2] = {co.b_entry(el, 0), 0};
    if (m == 2) {
      A[0][1] = co.a_entry(el, 0, 1);
      A[1][0] = co.a_entry(el, 1, 0);
      A[1][1] = co.a_entry(el, 1, 1);
      B[1] = co.b_entry(el, 1);
    }
    double D = co.D[el];
    for (int kr = 0; kr < es.n_nodes; ++kr) {
      const auto& er = es.nodes[kr];
      int r = pos[er.node];
      if (r < 0) continue;
      for (int kc = 0; kc < es.n_nodes; ++kc) {
        const auto& ec = es.nodes[kc];
        int c = pos[ec.node];
        if (c < 0) continue;
        double val = D * er.c_s * ec.c_s;
        for (int ax = 0; ax < m; ++ax)
          val += B[ax] * (er.c_s * ec.c_p[ax] + er.c_p[ax] * ec.c_s);
        for (int ar = 0; ar < m; ++ar)
          for (int ac = 0; ac < m; ++ac)
            val += A[ar][ac] * er.c_p[ar] * ec.c_p[ac];
        dense[static_cast<size_t>(r) * n + c] += val;
      }
    }
  });
  if (interior_nodes_out) *interior_nodes_out = inodes;
  return dense;
}

ComparisonReport comparison_test(const GraphPatch& u_super,
                                 const GraphPatch& u_sub,
                                 double hypothesis_tol) {
  if (!(u_super.geo == u_sub.geo)) throw DomainMismatch("patch geometries differ");
  const PatchGeometry& geo = u_super.geo;

  // hypotheses: residual signs (hat-function weak forms) and boundary order
  std::vector<double> r_sup = mse_residual(u_super);
  std::vector<double> r_sub = mse_residual(u_sub);
  auto inodes = interior_nodes(geo);
  for (int n : inodes) {
    if (r_sup[n] < -hypothesis_tol)
      throw HypothesisViolated("u_super is not a weak supersolution");
    if (r_sub[n] > hypothesis_tol)
      throw HypothesisViolated("u_sub is not a weak subsolution");
  }
  int nj = geo.base_dim == 2 ? geo.n[1] : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < geo.n[0]; ++i)
      if (geo.is_boundary_node(i, j)) {
        int n = geo.index(i, j);
        if (u_sub.u[n] > u_super.u[n] + 1e-12)
          throw HypothesisViolated("boundary data is not ordered");
      }

  MseSolveResult sup = resolve_patch(u_super);
  MseSolveResult sub = resolve_patch(u_sub);

  ComparisonReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.ordered = true;
  for (int n : inodes) {
    double gap = sup.patch.u[n] - sub.patch.u[n];
    rep.min_gap = std::min(rep.min_gap, gap);
    if (gap < -1e-8) rep.ordered = false;
  }
  if (inodes.empty()) rep.min_gap = 0.0;

  // where the graphs touch, the strict maximum principle surrogate: the two
  // fields agree on the 3x3 neighborhood of the touching node
  rep.touching_agree = true;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < geo.n[0]; ++i) {
      if (geo.is_boundary_node(i, j)) continue;
      int n = geo.index(i, j);
      if (std::abs(sup.patch.u[n] - sub.patch.u[n]) > 1e-8) continue;
      ++rep.touching_nodes;
      for (int dj = -1; dj <= (geo.base_dim == 2 ? 1 : 0); ++dj)
        for (int di = -1; di <= 1; ++di) {
          int ii = i + di, jj = geo.base_dim == 2 ? j + dj : 0;
          if (ii < 0 || ii >= geo.n[0] || jj < 0 || jj >= nj) continue;
          int nb = geo.index(ii, jj);
          double disagreement = std::abs(sup.patch.u[nb] - sub.patch.u[nb]);
          rep.max_touch_disagreement =
              std::max(rep.max_touch_disagreement, disagreement);
          if (disagreement > 1e-6) rep.touching_agree = false;
        }
    }
  rep.pass = rep.ordered && rep.touching_agree;
  return rep;
}

}  // namespace wlg
