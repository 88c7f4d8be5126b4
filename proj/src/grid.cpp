#include "maxlip/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maxlip {

Grid::Grid(int dim_, std::array<int, 2> shape_, double h_) : dim(dim_), shape(shape_), h(h_) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (dim == 1 && shape[1] != 1) throw std::invalid_argument("1D grid requires shape[1] == 1");
  if (shape[0] < 1 || shape[1] < 1) throw std::invalid_argument("grid shape must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing must be positive and finite");
}

BoxExtent cube_box(const Grid& g, const Cube& q) {
  if (g.dim == 1) return BoxExtent{q.anchor[0], q.anchor[0] + q.side, 0, 1};
  return BoxExtent{q.anchor[0], q.anchor[0] + q.side, q.anchor[1], q.anchor[1] + q.side};
}

bool cube_in_grid(const Grid& g, const Cube& q) {
  if (q.side < 1) return false;
  if (q.anchor[0] < 0 || q.anchor[0] + q.side > g.shape[0]) return false;
  if (g.dim == 1) return q.anchor[1] == 0;
  return q.anchor[1] >= 0 && q.anchor[1] + q.side <= g.shape[1];
}

void require_cube_in_grid(const Grid& g, const Cube& q) {
  if (!cube_in_grid(g, q)) {
    throw std::out_of_range("cube (" + std::to_string(q.anchor[0]) + "," +
                            std::to_string(q.anchor[1]) + ";" + std::to_string(q.side) +
                            ") not contained in grid");
  }
}

long cube_point_count(const Grid& g, const Cube& q) {
  return g.dim == 1 ? q.side : static_cast<long>(q.side) * q.side;
}

double cube_measure(const Grid& g, const Cube& q) {
  double ell = q.side * g.h;
  return g.dim == 1 ? ell : ell * ell;
}

bool cube_contains_point(const Grid& g, const Cube& q, int i, int j) {
  BoxExtent b = cube_box(g, q);
  return i >= b.i0 && i < b.i1 && j >= b.j0 && j < b.j1;
}

bool cube_contains_cube(const Grid& g, const Cube& outer, const Cube& inner) {
  BoxExtent o = cube_box(g, outer), in = cube_box(g, inner);
  return in.i0 >= o.i0 && in.i1 <= o.i1 && in.j0 >= o.j0 && in.j1 <= o.j1;
}

long cube_overlap_points(const Grid& g, const Cube& a, const Cube& b) {
  BoxExtent x = cube_box(g, a), y = cube_box(g, b);
  long di = std::max(0, std::min(x.i1, y.i1) - std::max(x.i0, y.i0));
  long dj = std::max(0, std::min(x.j1, y.j1) - std::max(x.j0, y.j0));
  return di * dj;
}

long count_cubes(const Grid& g, const CubeFamily& fam) {
  long total = 0;
  auto anchors = [&](int s) -> long {
    long a0 = g.shape[0] - s + 1;
    if (g.dim == 1) return a0;
    long a1 = g.shape[1] - s + 1;
    return a0 * a1;
  };
  auto dyadic_anchors = [&](int s) -> long {
    // anchors at multiples of s
    long a0 = (g.shape[0] - s) / s + 1;
    if (g.dim == 1) return a0;
    long a1 = (g.shape[1] - s) / s + 1;
    return a0 * a1;
  };
  switch (fam.mode) {
    case FamilyMode::all:
      for (int s = 1; s <= g.max_side(); ++s) total += anchors(s);
      return total;
    case FamilyMode::dyadic:
      for (int s = 1; s <= g.max_side(); s *= 2) total += dyadic_anchors(s);
      return total;
    case FamilyMode::sampled: {
      long full = count_cubes(g, CubeFamily::all());
      return std::min(fam.sample_count, full);
    }
  }
  throw std::logic_error("unreachable family mode");
}

static void append_for_side(const Grid& g, int s, int step, std::vector<Cube>& out) {
  if (g.dim == 1) {
    for (int a = 0; a + s <= g.shape[0]; a += step) out.push_back(Cube{{a, 0}, s});
    return;
  }
  for (int a = 0; a + s <= g.shape[0]; a += step)
    for (int b = 0; b + s <= g.shape[1]; b += step) out.push_back(Cube{{a, b}, s});
}

std::vector<Cube> enumerate_cubes(const Grid& g, const CubeFamily& fam) {
  std::vector<Cube> out;
  switch (fam.mode) {
    case FamilyMode::all:
      out.reserve(static_cast<size_t>(count_cubes(g, fam)));
      for (int s = 1; s <= g.max_side(); ++s) append_for_side(g, s, 1, out);
      return out;
    case FamilyMode::dyadic:
      for (int s = 1; s <= g.max_side(); s *= 2) append_for_side(g, s, s, out);
      return out;
    case FamilyMode::sampled: {
      if (fam.sample_count < 1) throw std::invalid_argument("sampled family needs a positive count");
      std::vector<Cube> full = enumerate_cubes(g, CubeFamily::all());
      long k = std::min<long>(fam.sample_count, static_cast<long>(full.size()));
      // partial Fisher-Yates, then restore canonical order among the selected
      Rng rng(fam.seed);
      long n = static_cast<long>(full.size());
      for (long i = 0; i < k; ++i) {
        long j = i + rng.uniform_index(n - i);
        std::swap(full[i], full[j]);
      }
      full.resize(static_cast<size_t>(k));
      std::sort(full.begin(), full.end(), [](const Cube& a, const Cube& b) {
        if (a.side != b.side) return a.side < b.side;
        if (a.anchor[0] != b.anchor[0]) return a.anchor[0] < b.anchor[0];
        return a.anchor[1] < b.anchor[1];
      });
      return full;
    }
  }
  throw std::logic_error("unreachable family mode");
}

GridFunction::GridFunction(Grid g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  if (static_cast<long>(values_.size()) != grid_.point_count())
    throw std::invalid_argument("value count does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
}

GridFunction GridFunction::constant(const Grid& g, double c) {
  return GridFunction(g, std::vector<double>(static_cast<size_t>(g.point_count()), c));
}

GridFunction GridFunction::from_fn(const Grid& g, const std::function<double(int, int)>& fn) {
  std::vector<double> v(static_cast<size_t>(g.point_count()));
  for (int i = 0; i < g.shape[0]; ++i)
    for (int j = 0; j < g.shape[1]; ++j) v[static_cast<size_t>(g.index(i, j))] = fn(i, j);
  return GridFunction(g, std::move(v));
}

GridFunction GridFunction::abs() const {
  std::vector<double> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = std::fabs(values_[k]);
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = c * values_[k];
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::shifted(double c) const {
  std::vector<double> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = values_[k] + c;
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::pointwise_mul(const GridFunction& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("grid mismatch in pointwise product");
  std::vector<double> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = values_[k] * other.values_[k];
  return GridFunction(grid_, std::move(v));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

PrefixTable::PrefixTable(const GridFunction& f) : grid_(f.grid()) {
  int n0 = grid_.shape[0], n1 = grid_.shape[1];
  table_.assign(static_cast<size_t>(n0 + 1) * (n1 + 1), detail::TwoFloat{});
  auto slot = [&](int i, int j) -> detail::TwoFloat& {
    return table_[static_cast<size_t>(i) * (n1 + 1) + j];
  };
  for (int i = 1; i <= n0; ++i) {
    detail::TwoFloat row{};  // running sum of the current row
    for (int j = 1; j <= n1; ++j) {
      row = detail::tf_add(row, f.at(i - 1, j - 1));
      slot(i, j) = detail::tf_add(slot(i - 1, j), row);
    }
  }
}

double PrefixTable::box_sum(int i0, int i1, int j0, int j1) const {
  if (i0 < 0 || j0 < 0 || i1 > grid_.shape[0] || j1 > grid_.shape[1] || i0 > i1 || j0 > j1)
    throw std::out_of_range("box outside grid");
  using namespace detail;
  TwoFloat s = tf_sub(tf_add(cell(i1, j1), cell(i0, j0)), tf_add(cell(i0, j1), cell(i1, j0)));
  return tf_value(s);
}

double PrefixTable::cube_sum(const Cube& q) const {
  require_cube_in_grid(grid_, q);
  BoxExtent b = cube_box(grid_, q);
  return box_sum(b.i0, b.i1, b.j0, b.j1);
}

double PrefixTable::cube_mean(const Cube& q) const {
  return cube_sum(q) / static_cast<double>(cube_point_count(grid_, q));
}

Exponents::Exponents(double p_, double beta_, double q_, int n_, double r_, double s_)
    : p(p_), beta(beta_), q(q_), n(n_), r(r_), s(s_) {
  if (n != 1 && n != 2) throw std::invalid_argument("dimension n must be 1 or 2");
  if (!(p > 1.0)) throw std::invalid_argument("exponent p must exceed 1");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("smoothness beta must lie in (0,1)");
  if (!(p < n / beta)) throw std::invalid_argument("need p < n/beta so that q is positive");
  double lhs = 1.0 / q, rhs = 1.0 / p - beta / n;
  if (std::fabs(lhs - rhs) > 1e-12)
    throw std::invalid_argument("exponents must satisfy 1/q = 1/p - beta/n");
  if (r != 0.0 && !(r > 1.0 && r < p))
    throw std::invalid_argument("auxiliary exponent r must lie in (1,p)");
  if (s != 0.0 && !(s >= 1.0)) throw std::invalid_argument("auxiliary exponent s must be >= 1");
}

Exponents Exponents::make(double p, double beta, int n, double r, double s) {
  if (!(p > 1.0) || !(beta > 0.0) || !(beta < 1.0) || !(p < n / beta))
    throw std::invalid_argument("cannot derive q: need p > 1, beta in (0,1), p < n/beta");
  double q = 1.0 / (1.0 / p - beta / n);
  return Exponents(p, beta, q, n, r, s);
}

double cube_mean(const GridFunction& f, const Cube& q, const PrefixTable& via) {
  if (!(f.grid() == via.grid())) throw std::invalid_argument("prefix table grid mismatch");
  return via.cube_mean(q);
}

double cube_min(const GridFunction& f, const Cube& q) {
  require_cube_in_grid(f.grid(), q);
  BoxExtent b = cube_box(f.grid(), q);
  double m = f.at(b.i0, b.j0);
  for (int i = b.i0; i < b.i1; ++i)
    for (int j = b.j0; j < b.j1; ++j) m = std::min(m, f.at(i, j));
  return m;
}

double cube_sum_direct(const GridFunction& f, const Cube& q) {
  require_cube_in_grid(f.grid(), q);
  BoxExtent b = cube_box(f.grid(), q);
  double s = 0.0;
  for (int i = b.i0; i < b.i1; ++i)
    for (int j = b.j0; j < b.j1; ++j) s += f.at(i, j);
  return s;
}

double cube_mean_direct(const GridFunction& f, const Cube& q) {
  return cube_sum_direct(f, q) / static_cast<double>(cube_point_count(f.grid(), q));
}

GridFunction restrict_to_cube(const GridFunction& f, const Cube& q) {
  require_cube_in_grid(f.grid(), q);
  const Grid& g = f.grid();
  std::vector<double> v(static_cast<size_t>(g.point_count()), 0.0);
  BoxExtent b = cube_box(g, q);
  for (int i = b.i0; i < b.i1; ++i)
    for (int j = b.j0; j < b.j1; ++j) v[static_cast<size_t>(g.index(i, j))] = f.at(i, j);
  return GridFunction(g, std::move(v));
}

long Rng::uniform_index(long n) {
  if (n <= 0) throw std::invalid_argument("uniform_index needs n > 0");
  std::uint64_t un = static_cast<std::uint64_t>(n);
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<long>(x % un);
}

}  // namespace maxlip
