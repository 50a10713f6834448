#include <cmath>
#include <sstream>

#include "doctest.h"
#include "wlg/boundary.hpp"
#include "wlg/level_set.hpp"
#include "wlg/set_minimizer.hpp"

using namespace wlg;

namespace {

// small rectangular interior with a pinned collar
DiscreteDomain rect_domain(int nx, int ny, double h = 1.0, int collar = 3) {
  return build_domain(shape_rect(0, 0, nx * h, ny * h), h, collar);
}

IndicatorSet random_exterior(const DiscreteDomain& dom, Rng& rng) {
  IndicatorSet L(dom.grid);
  for (int q : dom.collar_cells) L.set(q, rng.next_bool());
  return L;
}

WeightField random_weight(const Grid& g, Rng& rng) {
  std::vector<double> s(g.ncells());
  for (auto& v : s) v = rng.uniform(1.0, 3.0);
  return make_weight_samples(g, s);
}

}  // namespace

TEST_CASE("full and empty exterior constraints") {
  DiscreteDomain dom = rect_domain(3, 3);
  CutStencil st = make_stencil(2, 4);
  WeightField w = make_weight_constant(dom.grid, 1.0);

  SUBCASE("entire collar pinned in floods everything") {
    IndicatorSet L(dom.grid);
    for (int q : dom.collar_cells) L.set(q, true);
    MinimizerPair mp = solve_star(dom, w, st, L);
    CHECK(mp.value == 0.0);
    for (int c : dom.interior_cells) CHECK(mp.E_max.contains(c));
    CHECK(mp.E_max.count() == dom.grid.ncells());
  }
  SUBCASE("empty exterior forces the empty set") {
    IndicatorSet L(dom.grid);
    MinimizerPair mp = solve_star(dom, w, st, L);
    CHECK(mp.value == 0.0);
    CHECK(mp.E_max.count() == 0);
    CHECK(mp.E_min.count() == 0);
  }
}

TEST_CASE("exhaustive oracle basics") {
  CutStencil st = make_stencil(2, 4);

  SUBCASE("3x3 with empty exterior") {
    DiscreteDomain dom = rect_domain(3, 3);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    IndicatorSet L(dom.grid);
    MinimizerPair mp = exhaustive_min(dom, w, st, L);
    CHECK(mp.E_max.count() == 0);
    CHECK(mp.value == 0.0);
  }
  SUBCASE("2x2 with collar fully pinned in") {
    DiscreteDomain dom = rect_domain(2, 2);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    IndicatorSet L(dom.grid);
    for (int q : dom.collar_cells) L.set(q, true);
    MinimizerPair mp = exhaustive_min(dom, w, st, L);
    CHECK(mp.E_max.count() == dom.grid.ncells());
    CHECK(mp.value == 0.0);
  }
  SUBCASE("too many free cells is an error") {
    DiscreteDomain dom = rect_domain(5, 5);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    IndicatorSet L(dom.grid);
    CHECK_THROWS_AS(exhaustive_min(dom, w, st, L), TooLarge);
  }
}

TEST_CASE("solver equals the exhaustive oracle on random instances") {
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Rng rng(900 + trial);
    int nx = 2 + static_cast<int>(rng.next_below(3));
    int ny = 2 + static_cast<int>(rng.next_below(3));
    if (nx * ny > 16) ny = 16 / nx;
    DiscreteDomain dom = rect_domain(nx, ny);
    CutStencil st = make_stencil(2, trial % 2 ? 8 : 4);
    WeightField w = random_weight(dom.grid, rng);
    IndicatorSet L = random_exterior(dom, rng);

    MinimizerPair fast = solve_star(dom, w, st, L);
    MinimizerPair slow = exhaustive_min(dom, w, st, L);
    CHECK(fast.value_int == slow.value_int);
    CHECK(fast.value == slow.value);
    CHECK(fast.E_max == slow.E_max);
    CHECK(fast.E_min == slow.E_min);
    CHECK(fast.E_min.subset_of(fast.E_max));
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("3D oracle equivalence on tiny boxes") {
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(7000 + trial);
    DiscreteDomain dom = build_domain(shape_box(0, 0, 0, 2, 2, 3), 1.0, 3);
    REQUIRE(dom.interior_cells.size() <= 16);
    CutStencil st = make_stencil(3, 6);
    WeightField w = random_weight(dom.grid, rng);
    IndicatorSet L = random_exterior(dom, rng);
    MinimizerPair fast = solve_star(dom, w, st, L);
    MinimizerPair slow = exhaustive_min(dom, w, st, L);
    CHECK(fast.value_int == slow.value_int);
    CHECK(fast.E_max == slow.E_max);
  }
}

TEST_CASE("optimal sets form a lattice") {
  // constant weights produce plenty of ties, exercising the lattice closure
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(1300 + trial);
    DiscreteDomain dom = rect_domain(3, 3);
    CutStencil st = make_stencil(2, 4);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    IndicatorSet L = random_exterior(dom, rng);
    auto optima = exhaustive_optima(dom, w, st, L, 256);
    REQUIRE(optima.size() >= 1);
    CutProblem cp = build_cut_problem(dom, w, st, L);
    std::int64_t best = cp.value_int_of(optima.front());
    for (size_t i = 0; i < optima.size() && i < 12; ++i) {
      for (size_t j = i + 1; j < optima.size() && j < 12; ++j) {
        CHECK(cp.value_int_of(set_union(optima[i], optima[j])) == best);
        CHECK(cp.value_int_of(set_intersection(optima[i], optima[j])) == best);
      }
    }
  }
}

TEST_CASE("monotone exterior constraints give nested maximal minimizers") {
  Rng rng(4242);
  DiscreteDomain dom = rect_domain(4, 4, 0.5);
  CutStencil st = make_stencil(2, 8);
  WeightField w = random_weight(dom.grid, rng);

  // random monotone family: L(t) = {G >= t} for a random collar field G
  std::vector<double> G(dom.grid.ncells(), 0.0);
  for (int q : dom.collar_cells) G[q] = rng.uniform(0, 1);
  auto level = [&](double t) {
    IndicatorSet L(dom.grid);
    for (int q : dom.collar_cells) L.set(q, G[q] >= t);
    return L;
  };
  IndicatorSet prev;
  bool first = true;
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    MinimizerPair mp = solve_star(dom, w, st, level(t));
    if (!first) CHECK(mp.E_max.subset_of(prev));
    prev = mp.E_max;
    first = false;
  }
}

TEST_CASE("determinism of the cut solver") {
  Rng rng(5);
  DiscreteDomain dom = rect_domain(4, 3);
  CutStencil st = make_stencil(2, 8);
  WeightField w = random_weight(dom.grid, rng);
  IndicatorSet L = random_exterior(dom, rng);
  MinimizerPair a = solve_star(dom, w, st, L);
  MinimizerPair b = solve_star(dom, w, st, L);
  CHECK(a.value_int == b.value_int);
  CHECK(a.E_min == b.E_min);
  CHECK(a.E_max == b.E_max);
}

TEST_CASE("minimizer pair attains one objective value") {
  Rng rng(99);
  DiscreteDomain dom = rect_domain(4, 4);
  CutStencil st = make_stencil(2, 8);
  WeightField w = random_weight(dom.grid, rng);
  IndicatorSet L = random_exterior(dom, rng);
  MinimizerPair mp = solve_star(dom, w, st, L);
  auto region = CellRegion::whole_box(dom.grid);
  double pmin = alpha_perimeter(mp.E_min, region, w, st);
  double pmax = alpha_perimeter(mp.E_max, region, w, st);
  CHECK(std::abs(pmin - pmax) <= 1e-10);
  CHECK(std::abs(pmin - mp.value) <= 1e-9);
}

TEST_CASE("local minimality checking") {
  DiscreteDomain dom = rect_domain(6, 6, 0.5);
  CutStencil st = make_stencil(2, 4);
  WeightField w = make_weight_constant(dom.grid, 1.0);
  BoundaryData bd = extend_boundary_data(
      dom, [](const Point& p) { return p[0] > 1.5 ? 1.0 : 0.0; });
  IndicatorSet L = superlevel_exterior(dom, bd, 0.5);
  MinimizerPair mp = solve_star(dom, w, st, L);
  auto U = interior_region(dom);

  SUBCASE("a solved cut is locally minimal") {
    CHECK(local_minimality_check(mp.E_max, U, dom, w, st, 2).pass);
    CHECK(local_minimality_check(mp.E_max, U, dom, w, st, 3).pass);
  }
  SUBCASE("flipping one interior cell breaks minimality") {
    IndicatorSet bad = mp.E_max;
    // a cell deep enough inside that a 2-cell patch plus stencil halo fits
    int flip = -1;
    double best = 1e9;
    for (int c : dom.interior_cells) {
      Point p = dom.grid.center(c);
      double d = std::hypot(p[0] - 1.5, p[1] - 1.5);
      if (d < best) {
        best = d;
        flip = c;
      }
    }
    REQUIRE(flip >= 0);
    bad.v[flip] ^= 1;
    auto verdict = local_minimality_check(bad, U, dom, w, st, 2);
    CHECK(!verdict.pass);
    CHECK(verdict.improvement > 0.0);
  }
  SUBCASE("a flat half-space cut is minimal in the 4-neighborhood metric") {
    IndicatorSet half(dom.grid);
    for (int c = 0; c < dom.grid.ncells(); ++c)
      half.v[c] = dom.grid.center(c)[0] > 1.5 ? 1 : 0;
    CHECK(local_minimality_check(half, U, dom, w, st, 3).pass);
  }
}

TEST_CASE("barrier condition on disk and square") {
  double h = 1.0 / 32;
  CutStencil st = make_stencil(2, 16);

  SUBCASE("disk passes at a boundary cell") {
    DiscreteDomain dom = build_domain(shape_disk(0, 0, 1.0), h, 4);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    // boundary cell nearest to (1,0)
    int x0 = -1;
    double best = 1e9;
    for (int c : dom.boundary_cells) {
      Point p = dom.grid.center(c);
      double d = std::hypot(p[0] - 1.0, p[1]);
      if (d < best) {
        best = d;
        x0 = c;
      }
    }
    auto res = barrier_check(dom, w, st, x0, 0.3);
    CHECK(res.pass);
  }
  SUBCASE("square fails at an edge midpoint") {
    DiscreteDomain dom = build_domain(shape_rect(0, 0, 1, 1), h, 4);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    int x0 = -1;
    double best = 1e9;
    for (int c : dom.boundary_cells) {
      Point p = dom.grid.center(c);
      double d = std::hypot(p[0] - 0.5, p[1]);  // bottom edge midpoint
      if (d < best) {
        best = d;
        x0 = c;
      }
    }
    auto res = barrier_check(dom, w, st, x0, 0.3);
    CHECK(!res.pass);
    CHECK(res.witness_cells.size() > 0);
  }
  SUBCASE("parameter validation") {
    DiscreteDomain dom = build_domain(shape_disk(0, 0, 1.0), h, 4);
    WeightField w = make_weight_constant(dom.grid, 1.0);
    int x0 = dom.boundary_cells.front();
    CHECK_THROWS_AS(barrier_check(dom, w, st, x0, 1.5 * h), BallTooSmall);
    CHECK_THROWS_AS(barrier_check(dom, w, st, x0, 10.0), BallCoversDomain);
  }
}

TEST_CASE("inward-growing weight on the disk: frozen barrier verdict") {
  // weight 1 + 5 dist(x, dOmega) makes cuts near the boundary cheap relative
  // to interior detours; the observed verdict is frozen as a regression
  double h = 1.0 / 32;
  DiscreteDomain dom = build_domain(shape_disk(0, 0, 1.0), h, 4);
  auto dist = boundary_distance(dom);
  std::vector<double> samples(dom.grid.ncells());
  for (int c = 0; c < dom.grid.ncells(); ++c) samples[c] = 1.0 + 5.0 * dist[c];
  WeightField w = make_weight_samples(dom.grid, samples);
  CutStencil st = make_stencil(2, 16);
  int x0 = -1;
  double best = 1e9;
  for (int c : dom.boundary_cells) {
    Point p = dom.grid.center(c);
    double d = std::hypot(p[0] - 1.0, p[1]);
    if (d < best) {
      best = d;
      x0 = c;
    }
  }
  auto res = barrier_check(dom, w, st, x0, 0.3);
  // frozen regression: the solver strictly prefers a cut one layer inside
  // the boundary, so the verdict is pass with this optimal value
  CHECK(res.pass);
  CHECK(res.value == doctest::Approx(7.020292).epsilon(1e-5));
}

TEST_CASE("DIMACS dump round trip") {
  DiscreteDomain dom = rect_domain(2, 2);
  CutStencil st = make_stencil(2, 4);
  WeightField w = make_weight_constant(dom.grid, 1.0);
  IndicatorSet L(dom.grid);
  for (int q : dom.collar_cells) L.set(q, dom.grid.center(q)[0] > 1.0);
  CutProblem cp = build_cut_problem(dom, w, st, L);
  std::ostringstream os;
  dump_dimacs(cp, os);
  std::string text = os.str();
  CHECK(text.find("p max") != std::string::npos);
  CHECK(text.find("n ") != std::string::npos);
  // arc count in the header matches the emitted arcs
  std::istringstream is(text);
  std::string line;
  int arcs_declared = -1, arcs_seen = 0;
  while (std::getline(is, line)) {
    if (line.rfind("p max", 0) == 0) {
      std::istringstream ps(line.substr(5));
      int nodes;
      ps >> nodes >> arcs_declared;
    } else if (line.rfind("a ", 0) == 0) {
      ++arcs_seen;
    }
  }
  CHECK(arcs_declared == arcs_seen);
}
