#include "wlg/tv_solver.hpp"

#include <algorithm>
#include <cmath>

namespace wlg {

namespace {

// forward-difference gradient into `grad` (ncells * dim)
void apply_grad(const Grid& g, const std::vector<double>& u,
                std::vector<double>& grad) {
  const int dim = g.dim;
  for (int c = 0; c < g.ncells(); ++c) {
    for (int ax = 0; ax < dim; ++ax) {
      int nb = g.shift(c, ax == 0 ? 1 : 0, ax == 1 ? 1 : 0, ax == 2 ? 1 : 0);
      grad[static_cast<size_t>(c) * dim + ax] =
          nb >= 0 ? (u[nb] - u[c]) / g.h : 0.0;
    }
  }
}

// exact adjoint: out[c] = sum_ax (Y[c-e,ax] - Y[c,ax]) / h
void apply_grad_adjoint(const Grid& g, const std::vector<double>& Y,
                        std::vector<double>& out) {
  const int dim = g.dim;
  for (int c = 0; c < g.ncells(); ++c) {
    double acc = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
      int prev = g.shift(c, ax == 0 ? -1 : 0, ax == 1 ? -1 : 0, ax == 2 ? -1 : 0);
      double yprev = prev >= 0 ? Y[static_cast<size_t>(prev) * dim + ax] : 0.0;
      acc += (yprev - Y[static_cast<size_t>(c) * dim + ax]) / g.h;
    }
    out[c] = acc;
  }
}

double grad_norm_estimate(const Grid& g, std::uint64_t seed) {
  const int n = g.ncells();
  std::vector<double> x(n), gx(static_cast<size_t>(n) * g.dim), back(n);
  Rng rng(seed);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 20; ++it) {
    apply_grad(g, x, gx);
    apply_grad_adjoint(g, gx, back);
    double nrm = 0.0;
    for (double v : back) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) break;
    lambda = nrm;  // ||grad^T grad x|| with ||x|| = 1
    for (int i = 0; i < n; ++i) x[i] = back[i] / nrm;
  }
  return std::sqrt(lambda);
}

struct DualValue {
  double value;
};

// Valid lower bound for the pinned problem: optimal u lies in [m, M]
// (truncation does not increase the objective), so
//   D(Y) = h^n [ sum_collar G * (grad^T Y) + sum_Omega min(m*r, M*r) ]
// with r = (grad^T Y)|_Omega.
double dual_value(const DiscreteDomain& dom, const BoundaryData& bd,
                  const std::vector<double>& gradT_Y, double m, double M) {
  KahanSum s;
  for (int q : dom.collar_cells) s.add(bd.G[q] * gradT_Y[q]);
  for (int c : dom.interior_cells) {
    double r = gradT_Y[c];
    s.add(std::min(m * r, M * r));
  }
  return s.value() * dom.grid.cell_volume();
}

double primal_value(const Grid& g, const WeightField& w,
                    const std::vector<double>& grad) {
  KahanSum s;
  const int dim = g.dim;
  for (int c = 0; c < g.ncells(); ++c) {
    double m2 = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
      double d = grad[static_cast<size_t>(c) * dim + ax];
      m2 += d * d;
    }
    if (m2 != 0.0) s.add(w.cell[c] * std::sqrt(m2));
  }
  return s.value() * g.cell_volume();
}

}  // namespace

PdSolution solve_dirichlet_tv(const DiscreteDomain& dom, const WeightField& w,
                              const BoundaryData& bd, const PdParams& params) {
  require_same_grid(dom.grid, w.grid, "solve_dirichlet_tv");
  require_same_grid(dom.grid, bd.grid, "solve_dirichlet_tv");
  if (params.max_iter <= 0 || params.gap_tol <= 0)
    throw Error("solver parameters must be positive");

  const Grid& g = dom.grid;
  const int n = g.ncells();
  const int dim = g.dim;
  const double m = bd.min_value, M = bd.max_value;

  // init: nearest-boundary-value extension into Omega, G on the collar
  std::vector<double> u(n, 0.0);
  {
    for (int q : dom.collar_cells) u[q] = bd.G[q];
    for (int c : dom.interior_cells) {
      auto cc = g.coords(c);
      std::int64_t best = -1;
      int best_cell = -1;
      for (int b : dom.boundary_cells) {
        auto bc = g.coords(b);
        std::int64_t dx = cc[0] - bc[0], dy = cc[1] - bc[1], dz = cc[2] - bc[2];
        std::int64_t d2 = dx * dx + dy * dy + dz * dz;
        if (best < 0 || d2 < best) {
          best = d2;
          best_cell = b;
        }
      }
      u[c] = bd.g[best_cell];
    }
  }

  double L = grad_norm_estimate(g, 0x9d5f1c3b2a41ull) * 1.01;
  if (L <= 0.0) L = 2.0 * std::sqrt(static_cast<double>(dim)) / g.h;
  double tau = params.step_ratio / L;
  double sigma = 1.0 / (params.step_ratio * L);

  std::vector<double> Y(static_cast<size_t>(n) * dim, 0.0);
  std::vector<double> ubar(u), grad(static_cast<size_t>(n) * dim),
      gradT(static_cast<size_t>(n)), uprev(n);

  PdCertificate cert;
  cert.best_primal = std::numeric_limits<double>::infinity();

  auto certificate_check = [&](int iter) {
    apply_grad(g, u, grad);
    double primal = primal_value(g, w, grad);
    apply_grad_adjoint(g, Y, gradT);
    double dual = dual_value(dom, bd, gradT, m, M);
    double feas = 0.0;
    for (int c = 0; c < n; ++c) {
      double m2 = 0.0;
      for (int ax = 0; ax < dim; ++ax) {
        double y = Y[static_cast<size_t>(c) * dim + ax];
        m2 += y * y;
      }
      feas = std::max(feas, std::sqrt(m2) - w.cell[c]);
    }
    cert.primal = primal;
    cert.dual = dual;
    cert.feasibility = std::max(0.0, feas);
    cert.best_primal = std::min(cert.best_primal, primal);
    double denom = std::max({std::abs(primal), std::abs(dual), 1e-15});
    cert.gap = (primal - dual) <= 0 ? 0.0 : (primal - dual) / denom;
    cert.iterations = iter;
    return cert.gap <= params.gap_tol;
  };

  if (certificate_check(0)) {
    cert.converged = true;
    PdSolution sol;
    sol.u = ScalarField(g);
    sol.u.v = u;
    sol.Y = DiscreteVectorField(g);
    sol.Y.comp = Y;
    sol.certificate = cert;
    return sol;
  }

  for (int it = 1; it <= params.max_iter; ++it) {
    // dual ascent + projection onto |Y_c| <= a_c
    apply_grad(g, ubar, grad);
    for (int c = 0; c < n; ++c) {
      double m2 = 0.0;
      for (int ax = 0; ax < dim; ++ax) {
        size_t i = static_cast<size_t>(c) * dim + ax;
        Y[i] += sigma * grad[i];
        m2 += Y[i] * Y[i];
      }
      double nrm = std::sqrt(m2);
      if (nrm > w.cell[c]) {
        double f = w.cell[c] / nrm;
        for (int ax = 0; ax < dim; ++ax) Y[static_cast<size_t>(c) * dim + ax] *= f;
      }
    }
    // primal descent + pinning
    uprev = u;
    apply_grad_adjoint(g, Y, gradT);
    for (int c = 0; c < n; ++c) u[c] -= tau * gradT[c];
    for (int q : dom.collar_cells) u[q] = bd.G[q];
    for (int c = 0; c < n; ++c) ubar[c] = 2.0 * u[c] - uprev[c];

    if (it % params.check_every == 0 || it == params.max_iter) {
      if (certificate_check(it)) {
        cert.converged = true;
        break;
      }
    }
  }

  // final clamp to the data range; cannot increase the objective
  for (int c = 0; c < n; ++c) u[c] = std::clamp(u[c], m, M);

  PdSolution sol;
  sol.u = ScalarField(g);
  sol.u.v = std::move(u);
  sol.Y = DiscreteVectorField(g);
  sol.Y.comp = std::move(Y);
  sol.certificate = cert;
  return sol;
}

double objective_primal(const ScalarField& u, const DiscreteDomain& dom,
                        const WeightField& w, const CutStencil& st) {
  require_same_grid(u.grid, dom.grid, "objective_primal");
  require_same_grid(u.grid, w.grid, "objective_primal");
  const Grid& g = u.grid;
  KahanSum sum;
  // edges with at least one endpoint in Omega: the interior variation plus
  // the boundary mismatch across dOmega faces
  for (int a = 0; a < g.ncells(); ++a) {
    for (size_t k = 0; k < st.offsets.size(); ++k) {
      const auto& o = st.offsets[k];
      int b = g.shift(a, o.d[0], o.d[1], o.d[2]);
      if (b < 0) continue;
      if (!dom.interior[a] && !dom.interior[b]) continue;
      double d = std::abs(u.v[a] - u.v[b]);
      if (d != 0.0) sum.add(w.at_face(a, b) * st.weight(g, k) * d);
    }
  }
  return sum.value();
}

FieldDistance compare_solutions(const ScalarField& u1, const ScalarField& u2,
                                const CellRegion& region) {
  require_same_grid(u1.grid, u2.grid, "compare_solutions");
  require_same_grid(u1.grid, region.grid, "compare_solutions");
  FieldDistance d;
  KahanSum l1, l2;
  for (int c = 0; c < u1.grid.ncells(); ++c) {
    if (!region.contains(c)) continue;
    double diff = std::abs(u1.v[c] - u2.v[c]);
    l1.add(diff);
    l2.add(diff * diff);
    if (diff > d.linf) {
      d.linf = diff;
      d.argmax_cell = c;
      d.u1_at_argmax = u1.v[c];
      d.u2_at_argmax = u2.v[c];
    }
  }
  double hn = u1.grid.cell_volume();
  d.l1 = l1.value() * hn;
  d.l2 = std::sqrt(l2.value() * hn);
  return d;
}

ScalarField snap_to_levels(const ScalarField& u,
                           const std::vector<double>& levels) {
  ScalarField out = u;
  for (auto& v : out.v) {
    double snapped = levels.front();
    for (double t : levels) {
      if (t <= v)
        snapped = t;
      else
        break;
    }
    v = snapped;
  }
  return out;
}

}  // namespace wlg
