// Brute-force reference implementations.  Everything here is a direct loop
// over (point, cube) pairs with direct summation; no prefix tables, no code
// shared with the accelerated paths.  These are the oracles the accelerated
// implementations are tested against.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "maxlip/maximal.hpp"
#include "maxlip/weights.hpp"

namespace maxlip {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double mean_abs(const GridFunction& f, const Grid& g, const Cube& q) {
  BoxExtent b = cube_box(g, q);
  double s = 0.0;
  for (int i = b.i0; i < b.i1; ++i)
    for (int j = b.j0; j < b.j1; ++j) s += std::fabs(f.at(i, j));
  return s / static_cast<double>(b.points());
}

double mean_plain(const GridFunction& f, const Grid& g, const Cube& q) {
  BoxExtent b = cube_box(g, q);
  double s = 0.0;
  for (int i = b.i0; i < b.i1; ++i)
    for (int j = b.j0; j < b.j1; ++j) s += f.at(i, j);
  return s / static_cast<double>(b.points());
}

double mean_osc(const GridFunction& f, const Grid& g, const Cube& q) {
  double c = mean_plain(f, g, q);
  BoxExtent b = cube_box(g, q);
  double s = 0.0;
  for (int i = b.i0; i < b.i1; ++i)
    for (int j = b.j0; j < b.j1; ++j) s += std::fabs(f.at(i, j) - c);
  return s / static_cast<double>(b.points());
}

template <class PerCube>
OperatorOutput pointwise_sup(const Grid& g, const CubeFamily& fam, PerCube&& value_at) {
  std::vector<Cube> cubes = enumerate_cubes(g, fam);
  std::vector<double> out(static_cast<size_t>(g.point_count()), kNegInf);
  for (int i = 0; i < g.shape[0]; ++i)
    for (int j = 0; j < g.shape[1]; ++j) {
      long idx = g.index(i, j);
      for (const Cube& q : cubes) {
        if (!cube_contains_point(g, q, i, j)) continue;
        double v = value_at(q, i, j);
        if (v > out[static_cast<size_t>(idx)]) out[static_cast<size_t>(idx)] = v;
      }
    }
  for (double v : out)
    if (v == kNegInf) throw std::runtime_error("cube family does not cover every grid point");
  return OperatorOutput{GridFunction(g, std::move(out)), {}, {}};
}

}  // namespace

OperatorOutput hl_maximal_ref(const GridFunction& f, const CubeFamily& family) {
  const Grid& g = f.grid();
  return pointwise_sup(g, family, [&](const Cube& q, int, int) { return mean_abs(f, g, q); });
}

OperatorOutput restricted_maximal_ref(const GridFunction& f, const Cube& q0,
                                      const CubeFamily& family) {
  const Grid& g = f.grid();
  require_cube_in_grid(g, q0);
  std::vector<Cube> cubes;
  for (const Cube& q : enumerate_cubes(g, family))
    if (cube_contains_cube(g, q0, q)) cubes.push_back(q);

  std::vector<double> out(static_cast<size_t>(g.point_count()), 0.0);
  std::vector<std::uint8_t> defined(static_cast<size_t>(g.point_count()), 0);
  BoxExtent b0 = cube_box(g, q0);
  for (int i = b0.i0; i < b0.i1; ++i)
    for (int j = b0.j0; j < b0.j1; ++j) {
      double best = kNegInf;
      for (const Cube& q : cubes) {
        if (!cube_contains_point(g, q, i, j)) continue;
        double v = mean_abs(f, g, q);
        if (v > best) best = v;
      }
      if (best == kNegInf)
        throw std::runtime_error("restricted family does not cover every point of the base cube");
      long idx = g.index(i, j);
      out[static_cast<size_t>(idx)] = best;
      defined[static_cast<size_t>(idx)] = 1;
    }
  return OperatorOutput{GridFunction(g, std::move(out)), std::move(defined), {}};
}

OperatorOutput sharp_maximal_ref(const GridFunction& f, const CubeFamily& family) {
  const Grid& g = f.grid();
  return pointwise_sup(g, family, [&](const Cube& q, int, int) { return mean_osc(f, g, q); });
}

OperatorOutput maximal_commutator_ref(const GridFunction& b, const GridFunction& f,
                                      const CubeFamily& family) {
  const Grid& g = b.grid();
  if (!(g == f.grid())) throw std::invalid_argument("symbol and function must share a grid");
  return pointwise_sup(g, family, [&](const Cube& q, int i, int j) {
    double bx = b.at(i, j);
    BoxExtent box = cube_box(g, q);
    double s = 0.0;
    for (int ii = box.i0; ii < box.i1; ++ii)
      for (int jj = box.j0; jj < box.j1; ++jj)
        s += std::fabs(bx - b.at(ii, jj)) * std::fabs(f.at(ii, jj));
    return s / static_cast<double>(box.points());
  });
}

GridFunction commutator_maximal_ref(const GridFunction& b, const GridFunction& f,
                                    const CubeFamily& family) {
  if (!(b.grid() == f.grid())) throw std::invalid_argument("symbol and function must share a grid");
  GridFunction mf = hl_maximal_ref(f, family).values;
  GridFunction mbf = hl_maximal_ref(b.pointwise_mul(f), family).values;
  std::vector<double> v(static_cast<size_t>(b.size()));
  for (long k = 0; k < b.size(); ++k) v[static_cast<size_t>(k)] = b[k] * mf[k] - mbf[k];
  return GridFunction(b.grid(), std::move(v));
}

GridFunction commutator_sharp_ref(const GridFunction& b, const GridFunction& f,
                                  const CubeFamily& family) {
  if (!(b.grid() == f.grid())) throw std::invalid_argument("symbol and function must share a grid");
  GridFunction sf = sharp_maximal_ref(f, family).values;
  GridFunction sbf = sharp_maximal_ref(b.pointwise_mul(f), family).values;
  std::vector<double> v(static_cast<size_t>(b.size()));
  for (long k = 0; k < b.size(); ++k) v[static_cast<size_t>(k)] = b[k] * sf[k] - sbf[k];
  return GridFunction(b.grid(), std::move(v));
}

OperatorOutput weighted_fractional_maximal_ref(const GridFunction& f, const Weight& mu,
                                               double alpha, double r, const CubeFamily& family) {
  const Grid& g = f.grid();
  if (!(g == mu.grid())) throw std::invalid_argument("weight grid mismatch");
  int n = g.dim;
  if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("order alpha must lie in (0, n)");
  if (!(r > 0.0)) throw std::invalid_argument("exponent r must be positive");
  const double hn = g.cell_volume();
  const double e = 1.0 - r * alpha / n;
  return pointwise_sup(g, family, [&](const Cube& q, int, int) {
    BoxExtent box = cube_box(g, q);
    double num = 0.0, den = 0.0;
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j) {
        num += std::pow(std::fabs(f.at(i, j)), r) * mu.values()[g.index(i, j)];
        den += mu.values()[g.index(i, j)];
      }
    return std::pow(hn * num / std::pow(hn * den, e), 1.0 / r);
  });
}

}  // namespace maxlip
