#include <cmath>

#include "doctest.h"
#include "wlg/level_set.hpp"

using namespace wlg;

namespace {

double cos_theta(const Point& p) {
  double r = std::hypot(p[0], p[1]);
  return r > 0 ? p[0] / r : 1.0;
}

struct DiskCase {
  DiscreteDomain dom;
  WeightField w;
  CutStencil st;
  BoundaryData bd;
  LevelSetFamily fam;
};

DiskCase make_disk_case(double h, int K) {
  DiskCase d;
  d.dom = build_domain(shape_disk(0, 0, 1.0), h, 4);
  d.w = make_weight_constant(d.dom.grid, 1.0);
  d.st = make_stencil(2, 16);
  d.bd = extend_boundary_data(d.dom, cos_theta);
  d.fam = build_family(d.dom, d.w, d.st, d.bd, K);
  return d;
}

}  // namespace

TEST_CASE("constant data collapses to one level and a constant solution") {
  DiscreteDomain dom = build_domain(shape_disk(0, 0, 0.6), 1.0 / 8, 3);
  WeightField w = make_weight_constant(dom.grid, 1.0);
  CutStencil st = make_stencil(2, 8);
  BoundaryData bd = extend_boundary_data(dom, [](const Point&) { return 2.5; });
  LevelSetFamily fam = build_family(dom, w, st, bd, 16);
  CHECK(fam.num_levels() == 1);
  ScalarField u = assemble_solution(fam, dom, bd);
  for (int c : dom.interior_cells) CHECK(u.v[c] == 2.5);
}

TEST_CASE("disk with cos theta data: chords, nested and separated") {
  double h = 1.0 / 32;
  int K = 16;
  DiskCase d = make_disk_case(h, K);
  const Grid& g = d.dom.grid;
  REQUIRE(d.fam.num_levels() == K + 1);

  SUBCASE("nestedness holds exactly") {
    for (int k = 0; k + 1 < d.fam.num_levels(); ++k)
      CHECK(d.fam.rep(k + 1).subset_of(d.fam.rep(k)));
  }

  SUBCASE("exterior constraint is met exactly") {
    for (int k = 0; k < d.fam.num_levels(); ++k) {
      IndicatorSet L = superlevel_exterior(d.dom, d.bd, d.fam.levels[k]);
      for (int q : d.dom.collar_cells)
        CHECK(d.fam.rep(k).contains(q) == L.contains(q));
    }
  }

  SUBCASE("interfaces are within 3h of the vertical chords") {
    for (int k = 0; k < d.fam.num_levels(); ++k) {
      double t = d.fam.levels[k];
      double half2 = 1.0 - t * t;
      double half = half2 > 0 ? std::sqrt(half2) : 0.0;
      if (half < 2 * h) continue;  // degenerate chord at the extremes
      const IndicatorSet& E = d.fam.rep(k);
      double worst = 0.0;
      for (int c : d.dom.interior_cells) {
        bool edge = false;
        auto cc = g.coords(c);
        const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto& dd : d4) {
          int nb = g.shift(g.index(cc[0], cc[1], 0), dd[0], dd[1], 0);
          if (nb >= 0 && E.v[nb] != E.v[c]) edge = true;
        }
        if (!edge) continue;
        Point p = g.center(c);
        double dx = std::abs(p[0] - t);
        double dy = std::abs(p[1]) > half ? std::abs(p[1]) - half : 0.0;
        worst = std::max(worst, std::hypot(dx, dy));
      }
      CHECK(worst <= 3 * h);
    }
  }

  SUBCASE("boundary values of each level match its threshold") {
    double dt = d.fam.levels[1] - d.fam.levels[0];
    double tol = dt + 5.0 * h;  // Lip(g) = 1 on the unit circle
    auto rep = check_boundary_values(d.fam, d.dom, d.bd, tol);
    CHECK(rep.pass);
    CHECK(rep.max_deviation <= tol);
  }

  SUBCASE("distinct levels have disjoint interior boundaries") {
    auto plateaus = plateau_values(d.dom, d.bd);
    CHECK(plateaus.empty());
    auto rep = check_separation(d.fam, d.dom, plateaus);
    CHECK(rep.pass);
    CHECK(rep.pairs_exempted == 0);
    CHECK(rep.min_distance >= h);
  }

  SUBCASE("every interface component reaches the boundary") {
    for (int k = 0; k < d.fam.num_levels(); ++k)
      CHECK(check_component_reaches_boundary(d.fam.rep(k), d.dom).pass);
  }

  SUBCASE("assembled solution approximates x1 and recovers its levels") {
    ScalarField u = assemble_solution(d.fam, d.dom, d.bd);
    double dt = d.fam.levels[1] - d.fam.levels[0];
    double worst = 0.0;
    for (int c : d.dom.interior_cells)
      worst = std::max(worst, std::abs(u.v[c] - g.center(c)[0]));
    CHECK(worst <= dt + 4 * h);
    CHECK(superlevel_recovery_exact(d.fam, d.dom, u));
    // range stays inside the data range
    for (int c : d.dom.interior_cells) {
      CHECK(u.v[c] >= d.bd.min_value);
      CHECK(u.v[c] <= d.bd.max_value);
    }
  }
}

TEST_CASE("square with linear data gives nested slabs and a staircase") {
  double h = 1.0 / 16;
  DiscreteDomain dom = build_domain(shape_rect(0, 0, 1, 1), h, 4);
  WeightField w = make_weight_constant(dom.grid, 1.0);
  CutStencil st = make_stencil(2, 4);
  BoundaryData bd = extend_boundary_data(dom, [](const Point& p) { return p[0]; });
  int K = 8;
  LevelSetFamily fam = build_family(dom, w, st, bd, K);

  // slab structure: within each row the representative is monotone in x
  for (int k = 0; k < fam.num_levels(); ++k) {
    const IndicatorSet& E = fam.rep(k);
    for (int c : dom.interior_cells) {
      auto cc = dom.grid.coords(c);
      int right = dom.grid.shift(dom.grid.index(cc[0], cc[1], 0), 1, 0, 0);
      if (right >= 0 && dom.interior[right]) CHECK(E.v[c] <= E.v[right]);
    }
  }

  ScalarField u = assemble_solution(fam, dom, bd);
  double dt = fam.levels[1] - fam.levels[0];
  double worst = 0.0;
  for (int c : dom.interior_cells)
    worst = std::max(worst, std::abs(u.v[c] - dom.grid.center(c)[0]));
  CHECK(worst <= dt + 2 * h);
}

TEST_CASE("boundary-values checker flags a dilated level") {
  DiskCase d = make_disk_case(1.0 / 16, 8);
  LevelSetFamily bad = d.fam;
  int k = 4;
  const Grid& g = d.dom.grid;
  // dilate the mid-level set far enough that its interface rests on
  // boundary cells whose data is nowhere near the level
  IndicatorSet dil = bad.pairs[k].E_max;
  for (int round = 0; round < 12; ++round) {
    IndicatorSet src = dil;
    for (int c : d.dom.interior_cells) {
      auto cc = g.coords(c);
      const int d4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (auto& dd : d4) {
        int nb = g.shift(g.index(cc[0], cc[1], 0), dd[0], dd[1], 0);
        if (nb >= 0 && src.v[nb]) dil.v[c] = 1;
      }
    }
  }
  bad.pairs[k].E_max = dil;
  double dt = bad.levels[1] - bad.levels[0];
  auto rep = check_boundary_values(bad, d.dom, d.bd, dt + 5.0 / 16);
  CHECK(!rep.pass);
  CHECK(rep.witness_level == k);
}

TEST_CASE("floating bubble fails the component checker") {
  DiskCase d = make_disk_case(1.0 / 16, 4);
  IndicatorSet E = d.fam.rep(2);
  const Grid& g = d.dom.grid;
  int bubble = -1;
  for (int c : d.dom.interior_cells) {
    Point p = g.center(c);
    if (std::hypot(p[0] + 0.5, p[1]) < 0.05 && !E.v[c]) bubble = c;
  }
  REQUIRE(bubble >= 0);
  CHECK(check_component_reaches_boundary(E, d.dom).pass);
  IndicatorSet bad = E;
  bad.v[bubble] = 1;
  CHECK(!check_component_reaches_boundary(bad, d.dom).pass);
}

TEST_CASE("full set has an empty interface and passes vacuously") {
  DiskCase d = make_disk_case(1.0 / 16, 4);
  IndicatorSet full(d.dom.grid, 1);
  auto rep = check_component_reaches_boundary(full, d.dom);
  CHECK(rep.pass);
  CHECK(rep.components == 0);
}

TEST_CASE("assembly rejects a non-nested family") {
  DiskCase d = make_disk_case(1.0 / 16, 4);
  LevelSetFamily bad = d.fam;
  std::swap(bad.pairs[1].E_max, bad.pairs[3].E_max);
  CHECK_THROWS_AS(assemble_solution(bad, d.dom, d.bd), NestednessViolation);
}

TEST_CASE("plateau data exempts bracketing pairs") {
  double h = 1.0 / 16;
  DiscreteDomain dom = build_domain(shape_rect(0, 0, 1, 1), h, 4);
  WeightField w = make_weight_constant(dom.grid, 1.0);
  CutStencil st = make_stencil(2, 4);
  // two plateaus (left and right parts) with a sharp transition
  BoundaryData bd = extend_boundary_data(dom, [](const Point& p) {
    if (p[0] < 0.45) return 0.0;
    if (p[0] > 0.55) return 1.0;
    return 10.0 * (p[0] - 0.45);
  });
  auto plateaus = plateau_values(dom, bd);
  REQUIRE(plateaus.size() >= 2);
  LevelSetFamily fam = build_family(dom, w, st, bd, 4);
  auto rep = check_separation(fam, dom, plateaus);
  CHECK(rep.pairs_exempted > 0);
}

TEST_CASE("monotone boundary data gives a monotone solution") {
  double h = 1.0 / 16;
  DiscreteDomain dom = build_domain(shape_disk(0, 0, 1.0), h, 4);
  WeightField w = make_weight_constant(dom.grid, 1.0);
  CutStencil st = make_stencil(2, 16);

  SUBCASE("constant shift moves the solution exactly") {
    BoundaryData bd1 = extend_boundary_data(dom, cos_theta);
    BoundaryData bd2 = extend_boundary_data(
        dom, [](const Point& p) { return cos_theta(p) + 0.5; });
    LevelSetFamily f1 = build_family(dom, w, st, bd1, 8);
    LevelSetFamily f2 = build_family(dom, w, st, bd2, 8);
    ScalarField u1 = assemble_solution(f1, dom, bd1);
    ScalarField u2 = assemble_solution(f2, dom, bd2);
    for (int c : dom.interior_cells)
      CHECK(u2.v[c] == doctest::Approx(u1.v[c] + 0.5).epsilon(1e-12));
  }

  SUBCASE("pointwise larger data dominates") {
    // g2 = phi(g) for phi increasing and concave with phi(1) = 1, so the
    // primed level grid satisfies t'_k <= phi(t_k) and every primed level
    // set contains the unprimed one
    auto g2 = [](const Point& p) {
      double v = cos_theta(p);
      return v + 0.3 * (1.0 - v * v);
    };
    BoundaryData bd1 = extend_boundary_data(dom, cos_theta);
    BoundaryData bd2 = extend_boundary_data(dom, g2);
    LevelSetFamily f1 = build_family(dom, w, st, bd1, 8);
    LevelSetFamily f2 = build_family(dom, w, st, bd2, 8);
    ScalarField u1 = assemble_solution(f1, dom, bd1);
    ScalarField u2 = assemble_solution(f2, dom, bd2);
    for (int c : dom.interior_cells) CHECK(u2.v[c] >= u1.v[c] - 1e-12);
  }
}

TEST_CASE("discrete modulus decreases under refinement at fixed K") {
  // with K = 64 the level spacing is below the coarse cell size, so the
  // largest neighbor jump genuinely shrinks as h is refined:
  // 0.1249 -> 0.0625 -> 0.0312 (recorded sequence)
  int K = 64;
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    DiskCase d = make_disk_case(h, K);
    ScalarField u = assemble_solution(d.fam, d.dom, d.bd);
    double mod = discrete_modulus(u, d.dom);
    CHECK(mod <= prev + 1e-12);
    prev = mod;
  }
  CHECK(prev == doctest::Approx(0.03125).epsilon(0.01));
}
