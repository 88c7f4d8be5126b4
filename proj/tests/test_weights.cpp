#include <cmath>

#include "doctest.h"
#include "maxlip/grid.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/weights.hpp"

using namespace maxlip;

namespace {
const CubeFamily kAll = CubeFamily::all();

bool close(double a, double b, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}
}  // namespace

TEST_CASE("weight validation") {
  Grid g = Grid::line(3);
  CHECK_THROWS_AS(Weight(GridFunction(g, {1.0, 0.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(Weight(GridFunction(g, {1.0, -3.0, 2.0})), std::invalid_argument);
  CHECK_NOTHROW(Weight(GridFunction(g, {1e-8, 3.0, 2.0})));
}

TEST_CASE("weighted measure and power tables") {
  Grid g = Grid::line(4, 0.5);
  Weight w(GridFunction(g, {1.0, 2.0, 3.0, 4.0}));
  CHECK(close(w.measure(Cube{{0, 0}, 4}), 0.5 * 10.0));
  CHECK(close(weighted_measure(w, Cube{{1, 0}, 2}), 0.5 * 5.0));

  for (double t : {-1.0, -0.5, 0.5, 2.0}) {
    const GridFunction& pw = w.power_values(t);
    for (long k = 0; k < 4; ++k) CHECK(pw[k] == std::pow(w.values()[k], t));
    for (const Cube& q : enumerate_cubes(g, kAll)) {
      double direct = 0.0;
      for (int i = q.anchor[0]; i < q.anchor[0] + q.side; ++i)
        direct += std::pow(w.values()[i], t);
      CHECK(close(w.power_table(t).cube_sum(q), direct));
    }
  }
  // exponent 1 returns the weight itself (no duplicate cache entry)
  CHECK(&w.power_values(1.0) == &w.values());
}

TEST_CASE("A1 constant: frozen values") {
  Grid g = Grid::line(2);
  CHECK(a1_constant(Weight(GridFunction::constant(g, 1.0)), kAll) == 1.0);
  CHECK(a1_constant(Weight(GridFunction(g, {1.0, 2.0})), kAll) == 1.5);
  CHECK(a1_constant(Weight(GridFunction::constant(Grid::plane(4, 4), 2.5)), kAll) == 1.0);
}

TEST_CASE("A1 cube form equals pointwise form") {
  Rng rng(808);
  for (int rep = 0; rep < 6; ++rep) {
    Grid g = rep % 2 == 0 ? Grid::line(24) : Grid::plane(8, 8);
    Weight w(GridFunction::from_fn(g, [&](int, int) { return rng.uniform(0.5, 8.0); }));
    double cube_form = a1_constant(w, kAll);
    double point_form = a1_constant_pointwise(w, kAll);
    CHECK(cube_form == point_form);
    CHECK(cube_form >= 1.0);
  }
}

TEST_CASE("Ap constant: frozen value and monotonicity") {
  Grid g = Grid::line(2);
  Weight w(GridFunction(g, {1.0, 4.0}));
  CHECK(close(ap_constant(w, 2.0, kAll), 1.5625));
  CHECK(ap_constant(Weight(GridFunction::constant(g, 3.0)), 2.0, kAll) == 1.0);
  CHECK_THROWS_AS(ap_constant(w, 1.0, kAll), std::invalid_argument);

  Rng rng(191);
  Grid g2 = Grid::line(16);
  Weight w2(GridFunction::from_fn(g2, [&](int, int) { return rng.uniform(0.25, 4.0); }));
  double a1 = a1_constant(w2, kAll);
  double prev = a1;
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    double ap = ap_constant(w2, p, kAll);
    CHECK(ap >= 1.0 - 1e-12);
    CHECK(ap <= prev + 1e-10);  // nesting: nonincreasing in p, below A1
    prev = ap;
  }
}

TEST_CASE("power weight") {
  Grid g = Grid::line(64, 1.0 / 63.0);
  CHECK_THROWS_AS(power_weight(g, {0.5, 0.0}, 1.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(power_weight(g, {0.5, 0.0}, -0.1, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(power_weight(g, {0.5, 0.0}, 0.5, 0.0), std::invalid_argument);

  Weight flat = power_weight(g, {0.5, 0.0}, 0.0, 0.01);
  for (long k = 0; k < 64; ++k) CHECK(flat.values()[k] == 1.0);

  // center at the domain midpoint: values symmetric under reflection
  Weight w = power_weight(g, {0.5, 0.0}, 0.5, g.h / 2.0);
  for (long k = 0; k < 64; ++k) CHECK(close(w.values()[k], w.values()[63 - k]));
  double c = a1_constant(w, kAll);
  CHECK(c >= 1.0);
  CHECK(c < 20.0);
  // steeper singularity means larger A1 constant
  Weight w2 = power_weight(g, {0.5, 0.0}, 0.8, g.h / 2.0);
  CHECK(a1_constant(w2, kAll) > c);

  Grid g2 = Grid::plane(9, 9, 0.125);
  Weight w2d = power_weight(g2, {0.5, 0.5}, 1.5, 0.05);
  CHECK(a1_constant(w2d, kAll) >= 1.0);
}

TEST_CASE("Coifman-Rochberg weight") {
  Grid g = Grid::line(16);
  CHECK_THROWS_AS(coifman_rochberg_weight(GridFunction::constant(g, 0.0), 0.5, kAll),
                  std::invalid_argument);
  CHECK_THROWS_AS(coifman_rochberg_weight(GridFunction::constant(g, 1.0), 1.0, kAll),
                  std::invalid_argument);

  Weight one = coifman_rochberg_weight(GridFunction::constant(g, 1.0), 0.5, kAll);
  for (long k = 0; k < 16; ++k) CHECK(close(one.values()[k], 1.0, 1e-8));

  // point mass: w equals (M f + floor)^delta with M from the brute-force path
  GridFunction pm = GridFunction::from_fn(g, [](int i, int) { return i == 5 ? 3.0 : 0.0; });
  Weight w = coifman_rochberg_weight(pm, 0.5, kAll);
  GridFunction mref = hl_maximal_ref(pm, kAll).values;
  for (long k = 0; k < 16; ++k)
    CHECK(close(w.values()[k], std::pow(mref[k] + 1e-9 * 3.0, 0.5)));
  CHECK(a1_constant(w, kAll) >= 1.0);

  // larger delta gives a pointwise larger weight once M f >= 1 everywhere
  Rng rng(61);
  GridFunction f = GridFunction::from_fn(g, [&](int, int) { return rng.uniform(1.0, 6.0); });
  Weight lo = coifman_rochberg_weight(f, 0.3, kAll);
  Weight hi = coifman_rochberg_weight(f, 0.8, kAll);
  for (long k = 0; k < 16; ++k) CHECK(hi.values()[k] >= lo.values()[k]);
}

TEST_CASE("doubling ratio") {
  Grid g = Grid::line(9);
  Weight one(GridFunction::constant(g, 1.0));
  CHECK(doubling_ratio(one, Cube{{3, 0}, 3}) == 3.0);
  CHECK_THROWS_AS(doubling_ratio(one, Cube{{0, 0}, 3}), std::out_of_range);
  CHECK(!dilate3(g, Cube{{0, 0}, 3}).has_value());
  std::optional<Cube> t = dilate3(g, Cube{{3, 0}, 3});
  REQUIRE(t.has_value());
  CHECK(*t == Cube{{0, 0}, 9});

  Grid g2 = Grid::plane(9, 9);
  Weight one2(GridFunction::constant(g2, 1.0));
  CHECK(doubling_ratio(one2, Cube{{3, 3}, 3}) == 9.0);

  // A1 doubling bound on a genuinely varying weight
  Grid gw = Grid::line(27, 1.0 / 26.0);
  Weight w = power_weight(gw, {0.5, 0.0}, 0.6, gw.h);
  double bound = 3.0 * a1_constant(w, kAll) * (1.0 + 1e-9);
  for (const Cube& q : enumerate_cubes(gw, kAll)) {
    if (!dilate3(gw, q)) continue;
    CHECK(doubling_ratio(w, q) <= bound);
  }
}
