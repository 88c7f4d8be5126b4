#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "maxlip/grid.hpp"
#include "maxlip/lipschitz.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/weights.hpp"

using namespace maxlip;

namespace {

GridFunction random_fn(Rng& rng, const Grid& g, double lo, double hi) {
  return GridFunction::from_fn(g, [&](int, int) { return rng.uniform(lo, hi); });
}

Weight random_weight(Rng& rng, const Grid& g) {
  return Weight(GridFunction::from_fn(g, [&](int, int) { return rng.uniform(0.2, 3.0); }));
}

// direct re-computation of the weighted Lipschitz seminorm, no prefix tables
double lip_norm_direct(const GridFunction& b, const Weight& mu, double beta, double p,
                       const CubeFamily& fam) {
  const Grid& g = b.grid();
  double best = 0.0;
  for (const Cube& q : enumerate_cubes(g, fam)) {
    double bq = cube_mean_direct(b, q);
    double muq = 0.0;
    BoxExtent box = cube_box(g, q);
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j) muq += mu.values().at(i, j);
    muq *= g.cell_volume();
    double acc = 0.0;
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j)
        acc += std::pow(std::fabs(b.at(i, j) - bq), p) * std::pow(mu.values().at(i, j), 1.0 - p);
    double v = std::pow(muq, -beta / g.dim) * std::pow(g.cell_volume() * acc / muq, 1.0 / p);
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("lipschitz norm: two-point hand case") {
  Grid g = Grid::line(2, 1.0);
  GridFunction b(g, {0.0, 1.0});
  Weight unit(GridFunction::constant(g, 1.0));

  // only the full cube oscillates: mu(Q) = 2, b_Q = 1/2,
  // inner mean = 1/2, value = 2^(-1/2) * 1/2
  LipNormResult r = lip_norm(b, unit, 0.5, 1.0, CubeFamily::all());
  CHECK(r.value == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r.witness == Cube{{0, 0}, 2});
  CHECK(r.beta == 0.5);
  CHECK(r.p == 1.0);

  // |b - b_Q| is constant on the witness cube, so every p gives the same value
  for (double p : {1.5, 2.0, 3.0}) {
    CHECK(lip_norm(b, unit, 0.5, p, CubeFamily::all()).value ==
          doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-13));
  }
}

TEST_CASE("lipschitz norm: scaling and shift invariance") {
  Grid g = Grid::line(9, 0.25);
  Rng rng(71);
  GridFunction b = random_fn(rng, g, -2.0, 2.0);
  Weight w = random_weight(rng, g);
  double base = lip_norm(b, w, 0.3, 1.5, CubeFamily::all()).value;
  CHECK(base > 0.0);
  CHECK(lip_norm(b.scaled(-3.0), w, 0.3, 1.5, CubeFamily::all()).value ==
        doctest::Approx(3.0 * base).epsilon(1e-12));
  CHECK(lip_norm(b.shifted(7.5), w, 0.3, 1.5, CubeFamily::all()).value ==
        doctest::Approx(base).epsilon(1e-12));
  CHECK(lip_norm(GridFunction::constant(g, 4.0), w, 0.3, 1.5, CubeFamily::all()).value == 0.0);
}

TEST_CASE("lipschitz norm matches direct recomputation") {
  Rng rng(515);
  for (const Grid& g : {Grid::line(9, 0.5), Grid::plane(4, 5, 0.75)}) {
    for (int rep = 0; rep < 4; ++rep) {
      GridFunction b = random_fn(rng, g, -1.0, 3.0);
      Weight w = random_weight(rng, g);
      for (double p : {1.0, 1.7, 2.0}) {
        double got = lip_norm(b, w, 0.4, p, CubeFamily::all()).value;
        double want = lip_norm_direct(b, w, 0.4, p, CubeFamily::all());
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
      }
      double got_dy = lip_norm(b, w, 0.4, 2.0, CubeFamily::dyadic()).value;
      double want_dy = lip_norm_direct(b, w, 0.4, 2.0, CubeFamily::dyadic());
      CHECK(got_dy == doctest::Approx(want_dy).epsilon(1e-10));
      CHECK(got_dy <= lip_norm(b, w, 0.4, 2.0, CubeFamily::all()).value * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("lipschitz norm: equivalence table is nondecreasing in p") {
  // per cube the inner means are power means in disguise, so each cube's value
  // rises with p and so does the sup
  Rng rng(99);
  Grid g = Grid::line(14, 0.3);
  GridFunction b = random_fn(rng, g, 0.0, 5.0);
  Weight w = random_weight(rng, g);
  std::vector<double> ps{1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
  auto table = lip_norm_equivalence_table(b, w, 0.35, CubeFamily::all(), ps);
  REQUIRE(table.size() == ps.size());
  for (size_t k = 0; k < ps.size(); ++k) {
    CHECK(table[k].p == ps[k]);
    if (k > 0) CHECK(table[k].value >= table[k - 1].value * (1.0 - 1e-9));
  }
}

TEST_CASE("lipschitz norm: validation") {
  Grid g = Grid::line(4);
  GridFunction b(g, {0.0, 1.0, 0.5, 2.0});
  Weight unit(GridFunction::constant(g, 1.0));
  CHECK_THROWS_AS(lip_norm(b, unit, 0.0, 1.0, CubeFamily::all()), std::invalid_argument);
  CHECK_THROWS_AS(lip_norm(b, unit, 1.0, 1.0, CubeFamily::all()), std::invalid_argument);
  CHECK_THROWS_AS(lip_norm(b, unit, 0.5, 0.5, CubeFamily::all()), std::invalid_argument);
  Weight other(GridFunction::constant(Grid::line(5), 1.0));
  CHECK_THROWS_AS(lip_norm(b, other, 0.5, 1.0, CubeFamily::all()), std::invalid_argument);
  CHECK_THROWS_AS(lip_norm(b, unit, 0.5, 1.0, CubeFamily::sampled(0, 1)), std::invalid_argument);
}

TEST_CASE("pointwise and oscillation constants: two-point hand case") {
  Grid g = Grid::line(2, 1.0);
  GridFunction b(g, {0.0, 1.0});
  Weight unit(GridFunction::constant(g, 1.0));
  // norm = 2^(-1/2)/2, box weight = 2, so both constants collapse to 1
  CHECK(pointwise_lip_constant(b, unit, 0.5) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(oscillation_bound_constant(b, unit, 0.5, CubeFamily::all()) ==
        doctest::Approx(1.0).epsilon(1e-13));

  GridFunction c = GridFunction::constant(g, 2.0);
  CHECK(pointwise_lip_constant(c, unit, 0.5) == 0.0);
  CHECK(oscillation_bound_constant(c, unit, 0.5, CubeFamily::all()) == 0.0);
}

TEST_CASE("pointwise and oscillation constants: scale invariance and boundedness") {
  Rng rng(2024);
  Grid g = Grid::line(11, 0.4);
  GridFunction b = random_fn(rng, g, -1.0, 1.0);
  Weight w = random_weight(rng, g);
  double c1 = pointwise_lip_constant(b, w, 0.25);
  double c2 = oscillation_bound_constant(b, w, 0.25, CubeFamily::all());
  CHECK(c1 > 0.0);
  CHECK(c2 > 0.0);
  CHECK(pointwise_lip_constant(b.scaled(5.0), w, 0.25) == doctest::Approx(c1).epsilon(1e-12));
  CHECK(oscillation_bound_constant(b.scaled(-2.0), w, 0.25, CubeFamily::all()) ==
        doctest::Approx(c2).epsilon(1e-12));
  // dyadic family scans fewer (Q, x) pairs, so its sup cannot exceed the full one
  CHECK(oscillation_bound_constant(b, w, 0.25, CubeFamily::dyadic()) <= c2 * (1.0 + 1e-12));
}

TEST_CASE("maximal characterizing functional: two-point hand case") {
  Grid g = Grid::line(2, 1.0);
  GridFunction b(g, {0.0, 1.0});
  Weight unit(GridFunction::constant(g, 1.0));
  FunctionalProfile prof = maximal_char_functional(b, unit, 0.5, 1.0, CubeFamily::all());
  REQUIRE(prof.entries.size() == 3);
  // singleton cubes: b == M_Q(b) there, so zero; full cube:
  // M_Q(b) = [1/2, 1], diff = [-1/2, 0], value = 2^(-1/2) * 1/4
  CHECK(prof.entries[0].value == doctest::Approx(0.0));
  CHECK(prof.entries[1].value == doctest::Approx(0.0));
  CHECK(prof.entries[2].value == doctest::Approx(0.25 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(prof.sup == doctest::Approx(0.25 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(prof.witness == Cube{{0, 0}, 2});
  CHECK(prof.tag == "maximal_char");
}

TEST_CASE("sharp characterizing functional: two-point hand case") {
  Grid g = Grid::line(2, 1.0);
  GridFunction b(g, {0.0, 1.0});
  Weight unit(GridFunction::constant(g, 1.0));
  FunctionalProfile prof = sharp_char_functional(b, unit, 0.5, 1.0, CubeFamily::all());
  REQUIRE(prof.entries.size() == 3);
  // Q = {0}: b chi_Q = 0, diff = 0.  Q = {1}: M#(b chi_Q) = 1/2 everywhere,
  // diff at x=1 is 1 - 1 = 0.  Full cube: diff = [-1, 0], value = 2^(-1/2)/2.
  CHECK(prof.entries[0].value == doctest::Approx(0.0));
  CHECK(prof.entries[1].value == doctest::Approx(0.0));
  CHECK(prof.entries[2].value == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(prof.sup == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(prof.tag == "sharp_char");
}

TEST_CASE("characterizing functionals match reference-operator recomputation") {
  Rng rng(808);
  for (const Grid& g : {Grid::line(8, 0.5), Grid::plane(3, 4, 1.0)}) {
    GridFunction b = random_fn(rng, g, -2.0, 2.0);
    Weight w = random_weight(rng, g);
    const double beta = 0.3, s = 1.4;
    FunctionalProfile mprof = maximal_char_functional(b, w, beta, s, CubeFamily::all());
    FunctionalProfile sprof = sharp_char_functional(b, w, beta, s, CubeFamily::all());
    std::vector<Cube> cubes = enumerate_cubes(g, CubeFamily::all());
    REQUIRE(mprof.entries.size() == cubes.size());
    REQUIRE(sprof.entries.size() == cubes.size());
    for (size_t k = 0; k < cubes.size(); ++k) {
      const Cube& q = cubes[k];
      CHECK(mprof.entries[k].cube == q);
      OperatorOutput mq = restricted_maximal_ref(b, q, CubeFamily::all());
      OperatorOutput sh = sharp_maximal_ref(restrict_to_cube(b, q), CubeFamily::all());
      double muq = 0.0, accm = 0.0, accs = 0.0;
      BoxExtent box = cube_box(g, q);
      for (int i = box.i0; i < box.i1; ++i)
        for (int j = box.j0; j < box.j1; ++j) {
          long idx = g.index(i, j);
          double mu = w.values()[idx];
          muq += mu;
          accm += std::pow(std::fabs(b[idx] - mq.value_at(idx)), s) * std::pow(mu, 1.0 - s);
          accs += std::pow(std::fabs(b[idx] - 2.0 * sh.values[idx]), s) * std::pow(mu, 1.0 - s);
        }
      muq *= g.cell_volume();
      double scale = std::pow(muq, -beta / g.dim);
      double wantm = scale * std::pow(g.cell_volume() * accm / muq, 1.0 / s);
      double wants = scale * std::pow(g.cell_volume() * accs / muq, 1.0 / s);
      CHECK(mprof.entries[k].value == doctest::Approx(wantm).epsilon(1e-10));
      CHECK(sprof.entries[k].value == doctest::Approx(wants).epsilon(1e-10));
    }
  }
}

TEST_CASE("characterizing functionals: multi-exponent batch equals one-at-a-time") {
  Rng rng(99182);
  Grid g = Grid::line(9, 0.25);
  GridFunction b = random_fn(rng, g, 0.0, 4.0);
  Weight w = random_weight(rng, g);
  std::vector<double> ss{1.0, 1.5, 2.0, 3.0};
  auto mm = maximal_char_functional_multi(b, w, 0.45, ss, CubeFamily::all());
  auto sm = sharp_char_functional_multi(b, w, 0.45, ss, CubeFamily::all());
  REQUIRE(mm.size() == ss.size());
  REQUIRE(sm.size() == ss.size());
  for (size_t t = 0; t < ss.size(); ++t) {
    FunctionalProfile m1 = maximal_char_functional(b, w, 0.45, ss[t], CubeFamily::all());
    FunctionalProfile s1 = sharp_char_functional(b, w, 0.45, ss[t], CubeFamily::all());
    CHECK(mm[t].s == ss[t]);
    CHECK(mm[t].sup == m1.sup);
    CHECK(sm[t].sup == s1.sup);
    REQUIRE(mm[t].entries.size() == m1.entries.size());
    for (size_t k = 0; k < m1.entries.size(); ++k) {
      CHECK(mm[t].entries[k].value == m1.entries[k].value);
      CHECK(sm[t].entries[k].value == s1.entries[k].value);
    }
  }
  // the per-cube values are nondecreasing in s (Holder), hence so are the sups
  for (size_t t = 1; t < ss.size(); ++t) {
    for (size_t k = 0; k < mm[t].entries.size(); ++k) {
      CHECK(mm[t].entries[k].value >= mm[t - 1].entries[k].value * (1.0 - 1e-9));
      CHECK(sm[t].entries[k].value >= sm[t - 1].entries[k].value * (1.0 - 1e-9));
    }
    CHECK(mm[t].sup >= mm[t - 1].sup * (1.0 - 1e-9));
    CHECK(sm[t].sup >= sm[t - 1].sup * (1.0 - 1e-9));
  }
}

TEST_CASE("characterizing functionals: validation") {
  Grid g = Grid::line(4);
  GridFunction b(g, {0.0, 1.0, 0.5, 2.0});
  Weight unit(GridFunction::constant(g, 1.0));
  CHECK_THROWS_AS(maximal_char_functional(b, unit, 0.5, 0.9, CubeFamily::all()),
                  std::invalid_argument);
  CHECK_THROWS_AS(sharp_char_functional(b, unit, 1.5, 1.0, CubeFamily::all()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      maximal_char_functional_multi(b, unit, 0.5, {}, CubeFamily::all()),
      std::invalid_argument);
  Weight other(GridFunction::constant(Grid::line(6), 1.0));
  CHECK_THROWS_AS(sharp_char_functional(b, other, 0.5, 1.0, CubeFamily::all()),
                  std::invalid_argument);
}
