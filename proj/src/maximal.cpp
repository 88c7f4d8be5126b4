#include "maxlip/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "maxlip/weights.hpp"

namespace maxlip {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// dst[x] = max of src[a] over anchors a in [max(0, x-s+1), min(x, n_anchors-1)].
// Both window ends are nondecreasing in x, so a monotone deque gives O(n).
void window_max(const double* src, long n_anchors, long n_points, int s, double* dst) {
  std::deque<long> dq;
  long r = -1;
  for (long x = 0; x < n_points; ++x) {
    long hi = std::min<long>(x, n_anchors - 1);
    long lo = std::max<long>(0, x - s + 1);
    while (r < hi) {
      ++r;
      while (!dq.empty() && src[dq.back()] <= src[r]) dq.pop_back();
      dq.push_back(r);
    }
    while (dq.front() < lo) dq.pop_front();
    dst[x] = src[dq.front()];
  }
}

void chmax_into(const std::vector<double>& src, std::vector<double>& dst) {
  for (size_t k = 0; k < dst.size(); ++k)
    if (src[k] > dst[k]) dst[k] = src[k];
}

// Supremum over the family of a per-cube aggregate, scattered to the cube's
// points.  For the all-family without argmax recording the scatter runs as a
// separable sliding-window maximum per side (O(points) per side); otherwise
// cubes are visited in enumeration order and the first cube attaining the
// running maximum is kept as argmax.
template <class Agg>
OperatorOutput scatter_sup(const Grid& g, const CubeFamily& fam, Agg&& agg, bool record_argmax) {
  const long n = g.point_count();
  std::vector<double> out(static_cast<size_t>(n), kNegInf);
  std::vector<Cube> arg;

  if (fam.mode == FamilyMode::all && !record_argmax) {
    const int n0 = g.shape[0], n1 = g.shape[1];
    if (g.dim == 1) {
      std::vector<double> vals, buf(static_cast<size_t>(n0));
      for (int s = 1; s <= n0; ++s) {
        long m = n0 - s + 1;
        vals.resize(static_cast<size_t>(m));
        for (long a = 0; a < m; ++a) vals[static_cast<size_t>(a)] = agg(Cube{{static_cast<int>(a), 0}, s});
        window_max(vals.data(), m, n0, s, buf.data());
        chmax_into(buf, out);
      }
    } else {
      std::vector<double> vals, rowpass, col, colout(static_cast<size_t>(n0)), plane(static_cast<size_t>(n));
      for (int s = 1; s <= g.max_side(); ++s) {
        long m0 = n0 - s + 1, m1 = n1 - s + 1;
        vals.resize(static_cast<size_t>(m0 * m1));
        for (long a = 0; a < m0; ++a)
          for (long b = 0; b < m1; ++b)
            vals[static_cast<size_t>(a * m1 + b)] =
                agg(Cube{{static_cast<int>(a), static_cast<int>(b)}, s});
        rowpass.resize(static_cast<size_t>(m0 * n1));
        for (long a = 0; a < m0; ++a)
          window_max(vals.data() + a * m1, m1, n1, s, rowpass.data() + a * n1);
        col.resize(static_cast<size_t>(m0));
        for (int j = 0; j < n1; ++j) {
          for (long a = 0; a < m0; ++a) col[static_cast<size_t>(a)] = rowpass[static_cast<size_t>(a * n1 + j)];
          window_max(col.data(), m0, n0, s, colout.data());
          for (int i = 0; i < n0; ++i) plane[static_cast<size_t>(g.index(i, j))] = colout[static_cast<size_t>(i)];
        }
        chmax_into(plane, out);
      }
    }
  } else {
    std::vector<Cube> cubes = enumerate_cubes(g, fam);
    if (record_argmax) arg.assign(static_cast<size_t>(n), Cube{});
    for (const Cube& q : cubes) {
      double v = agg(q);
      BoxExtent b = cube_box(g, q);
      for (int i = b.i0; i < b.i1; ++i)
        for (int j = b.j0; j < b.j1; ++j) {
          long idx = g.index(i, j);
          if (v > out[static_cast<size_t>(idx)]) {
            out[static_cast<size_t>(idx)] = v;
            if (record_argmax) arg[static_cast<size_t>(idx)] = q;
          }
        }
    }
  }

  for (long k = 0; k < n; ++k)
    if (out[static_cast<size_t>(k)] == kNegInf)
      throw std::runtime_error("cube family does not cover every grid point");
  return OperatorOutput{GridFunction(g, std::move(out)), {}, std::move(arg)};
}

std::vector<Cube> cubes_inside(const Grid& g, const Cube& q0, const CubeFamily& fam) {
  if (fam.mode == FamilyMode::all) {
    std::vector<Cube> out;
    BoxExtent b0 = cube_box(g, q0);
    for (int s = 1; s <= q0.side; ++s) {
      if (g.dim == 1) {
        for (int a = b0.i0; a + s <= b0.i1; ++a) out.push_back(Cube{{a, 0}, s});
      } else {
        for (int a = b0.i0; a + s <= b0.i1; ++a)
          for (int b = b0.j0; b + s <= b0.j1; ++b) out.push_back(Cube{{a, b}, s});
      }
    }
    return out;
  }
  std::vector<Cube> out;
  for (const Cube& q : enumerate_cubes(g, fam))
    if (cube_contains_cube(g, q0, q)) out.push_back(q);
  return out;
}

}  // namespace

double OperatorOutput::value_at(long idx) const {
  if (!is_defined(idx)) throw std::out_of_range("operator value queried outside its domain");
  return values[idx];
}

OperatorOutput hl_maximal(const GridFunction& f, const CubeFamily& family, bool record_argmax) {
  GridFunction absf = f.abs();
  PrefixTable table(absf);
  auto agg = [&](const Cube& q) { return table.cube_mean(q); };
  return scatter_sup(f.grid(), family, agg, record_argmax);
}

OperatorOutput restricted_maximal(const GridFunction& f, const Cube& q0,
                                  const CubeFamily& family, bool record_argmax) {
  const Grid& g = f.grid();
  require_cube_in_grid(g, q0);
  // table over |f| restricted to q0: bitwise identical to what hl_maximal
  // builds for restrict(|f|, q0), which makes the restriction identity exact
  PrefixTable table(restrict_to_cube(f.abs(), q0));

  const long n = g.point_count();
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  std::vector<double> best(static_cast<size_t>(n), kNegInf);
  std::vector<std::uint8_t> defined(static_cast<size_t>(n), 0);
  std::vector<Cube> arg;
  if (record_argmax) arg.assign(static_cast<size_t>(n), Cube{});

  for (const Cube& q : cubes_inside(g, q0, family)) {
    double v = table.cube_mean(q);
    BoxExtent b = cube_box(g, q);
    for (int i = b.i0; i < b.i1; ++i)
      for (int j = b.j0; j < b.j1; ++j) {
        long idx = g.index(i, j);
        if (v > best[static_cast<size_t>(idx)]) {
          best[static_cast<size_t>(idx)] = v;
          if (record_argmax) arg[static_cast<size_t>(idx)] = q;
        }
      }
  }

  BoxExtent b0 = cube_box(g, q0);
  for (int i = b0.i0; i < b0.i1; ++i)
    for (int j = b0.j0; j < b0.j1; ++j) {
      long idx = g.index(i, j);
      if (best[static_cast<size_t>(idx)] == kNegInf)
        throw std::runtime_error("restricted family does not cover every point of the base cube");
      out[static_cast<size_t>(idx)] = best[static_cast<size_t>(idx)];
      defined[static_cast<size_t>(idx)] = 1;
    }
  return OperatorOutput{GridFunction(g, std::move(out)), std::move(defined), std::move(arg)};
}

OperatorOutput sharp_maximal(const GridFunction& f, const CubeFamily& family, bool record_argmax) {
  const Grid& g = f.grid();
  PrefixTable table(f);
  auto agg = [&](const Cube& q) {
    double c = table.cube_mean(q);
    BoxExtent b = cube_box(g, q);
    double s = 0.0;
    for (int i = b.i0; i < b.i1; ++i)
      for (int j = b.j0; j < b.j1; ++j) s += std::fabs(f.at(i, j) - c);
    return s / static_cast<double>(cube_point_count(g, q));
  };
  return scatter_sup(g, family, agg, record_argmax);
}

OperatorOutput maximal_commutator(const GridFunction& b, const GridFunction& f,
                                  const CubeFamily& family, bool record_argmax) {
  const Grid& g = b.grid();
  if (!(g == f.grid())) throw std::invalid_argument("symbol and function must share a grid");
  PrefixTable btable(b);

  const long n = g.point_count();
  std::vector<double> out(static_cast<size_t>(n), kNegInf);
  std::vector<Cube> arg;
  if (record_argmax) arg.assign(static_cast<size_t>(n), Cube{});

  // scratch shared across cubes
  std::vector<long> idxs;
  std::vector<double> sv, fv, svs, fvs, pf, pbf;
  std::vector<int> ord;

  for (const Cube& q : enumerate_cubes(g, family)) {
    BoxExtent box = cube_box(g, q);
    long m = box.points();
    idxs.clear(); sv.clear(); fv.clear();
    double c = btable.cube_mean(q);
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j) {
        long idx = g.index(i, j);
        idxs.push_back(idx);
        sv.push_back(b[idx] - c);
        fv.push_back(std::fabs(f[idx]));
      }
    ord.resize(static_cast<size_t>(m));
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b2) { return sv[static_cast<size_t>(a)] < sv[static_cast<size_t>(b2)]; });
    svs.resize(static_cast<size_t>(m));
    fvs.resize(static_cast<size_t>(m));
    for (long t = 0; t < m; ++t) {
      svs[static_cast<size_t>(t)] = sv[static_cast<size_t>(ord[static_cast<size_t>(t)])];
      fvs[static_cast<size_t>(t)] = fv[static_cast<size_t>(ord[static_cast<size_t>(t)])];
    }
    pf.assign(static_cast<size_t>(m + 1), 0.0);
    pbf.assign(static_cast<size_t>(m + 1), 0.0);
    for (long t = 0; t < m; ++t) {
      pf[static_cast<size_t>(t + 1)] = pf[static_cast<size_t>(t)] + fvs[static_cast<size_t>(t)];
      pbf[static_cast<size_t>(t + 1)] = pbf[static_cast<size_t>(t)] + svs[static_cast<size_t>(t)] * fvs[static_cast<size_t>(t)];
    }
    // sum_y |b(x)-b(y)| |f(y)| split at b(x); centering by the cube mean of b
    // keeps both partial sums small so the split loses no precision
    double inv = 1.0 / static_cast<double>(m);
    for (long k = 0; k < m; ++k) {
      double u = sv[static_cast<size_t>(k)];
      long cnt = std::upper_bound(svs.begin(), svs.end(), u) - svs.begin();
      double low = u * pf[static_cast<size_t>(cnt)] - pbf[static_cast<size_t>(cnt)];
      double high = (pbf[static_cast<size_t>(m)] - pbf[static_cast<size_t>(cnt)]) -
                    u * (pf[static_cast<size_t>(m)] - pf[static_cast<size_t>(cnt)]);
      double v = (low + high) * inv;
      long idx = idxs[static_cast<size_t>(k)];
      if (v > out[static_cast<size_t>(idx)]) {
        out[static_cast<size_t>(idx)] = v;
        if (record_argmax) arg[static_cast<size_t>(idx)] = q;
      }
    }
  }

  for (long k = 0; k < n; ++k)
    if (out[static_cast<size_t>(k)] == kNegInf)
      throw std::runtime_error("cube family does not cover every grid point");
  return OperatorOutput{GridFunction(g, std::move(out)), {}, std::move(arg)};
}

GridFunction commutator_maximal(const GridFunction& b, const GridFunction& f,
                                const CubeFamily& family) {
  if (!(b.grid() == f.grid())) throw std::invalid_argument("symbol and function must share a grid");
  GridFunction mf = hl_maximal(f, family).values;
  GridFunction mbf = hl_maximal(b.pointwise_mul(f), family).values;
  std::vector<double> v(static_cast<size_t>(b.size()));
  for (long k = 0; k < b.size(); ++k) v[static_cast<size_t>(k)] = b[k] * mf[k] - mbf[k];
  return GridFunction(b.grid(), std::move(v));
}

GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f,
                              const CubeFamily& family) {
  if (!(b.grid() == f.grid())) throw std::invalid_argument("symbol and function must share a grid");
  GridFunction sf = sharp_maximal(f, family).values;
  GridFunction sbf = sharp_maximal(b.pointwise_mul(f), family).values;
  std::vector<double> v(static_cast<size_t>(b.size()));
  for (long k = 0; k < b.size(); ++k) v[static_cast<size_t>(k)] = b[k] * sf[k] - sbf[k];
  return GridFunction(b.grid(), std::move(v));
}

OperatorOutput weighted_fractional_maximal(const GridFunction& f, const Weight& mu,
                                           double alpha, double r, const CubeFamily& family,
                                           bool record_argmax) {
  const Grid& g = f.grid();
  if (!(g == mu.grid())) throw std::invalid_argument("weight grid mismatch");
  int n = g.dim;
  if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("order alpha must lie in (0, n)");
  if (!(r > 0.0)) throw std::invalid_argument("exponent r must be positive");

  std::vector<double> integrand(static_cast<size_t>(g.point_count()));
  for (long k = 0; k < g.point_count(); ++k)
    integrand[static_cast<size_t>(k)] = std::pow(std::fabs(f[k]), r) * mu.values()[k];
  PrefixTable ptab(GridFunction(g, std::move(integrand)));

  const double hn = g.cell_volume();
  const double e = 1.0 - r * alpha / n;
  auto agg = [&](const Cube& q) {
    double num = hn * ptab.cube_sum(q);
    double muq = hn * mu.table().cube_sum(q);
    return std::pow(num / std::pow(muq, e), 1.0 / r);
  };
  return scatter_sup(g, family, agg, record_argmax);
}

}  // namespace maxlip
