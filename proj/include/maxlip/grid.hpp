#ifndef MAXLIP_GRID_HPP
#define MAXLIP_GRID_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace maxlip {

// Finite lattice in 1 or 2 dimensions with a uniform step h on every axis.
// Points are indexed (i, j) with 0 <= i < shape[0], 0 <= j < shape[1];
// in 1D shape[1] == 1 and j is always 0.  The coordinate of (i, j) is (i*h, j*h).
struct Grid {
  int dim = 1;
  std::array<int, 2> shape{2, 1};
  double h = 1.0;

  Grid() = default;
  Grid(int dim_, std::array<int, 2> shape_, double h_);

  static Grid line(int n, double h = 1.0) { return Grid(1, {n, 1}, h); }
  static Grid plane(int n0, int n1, double h = 1.0) { return Grid(2, {n0, n1}, h); }

  long point_count() const { return static_cast<long>(shape[0]) * shape[1]; }
  int max_side() const { return dim == 1 ? shape[0] : std::min(shape[0], shape[1]); }
  long index(int i, int j) const { return static_cast<long>(i) * shape[1] + j; }
  // h^dim, the volume of one lattice cell
  double cell_volume() const { return dim == 1 ? h : h * h; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && shape == o.shape && h == o.h;
  }
};

// Axis-aligned lattice cube: `side` points per axis starting at `anchor`.
// In 1D the second anchor component is 0 and the cube spans a single row.
struct Cube {
  std::array<int, 2> anchor{0, 0};
  int side = 1;

  bool operator==(const Cube& o) const { return anchor == o.anchor && side == o.side; }
};

// Half-open index box [i0,i1) x [j0,j1); the common currency of the summation
// kernels below.  A 1D cube maps to j-extent [0,1).
struct BoxExtent {
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0;
  long points() const { return static_cast<long>(i1 - i0) * (j1 - j0); }
};

BoxExtent cube_box(const Grid& g, const Cube& q);
bool cube_in_grid(const Grid& g, const Cube& q);
void require_cube_in_grid(const Grid& g, const Cube& q);
long cube_point_count(const Grid& g, const Cube& q);
// Lebesgue measure (side*h)^dim
double cube_measure(const Grid& g, const Cube& q);
bool cube_contains_point(const Grid& g, const Cube& q, int i, int j);
// true iff inner lies entirely inside outer
bool cube_contains_cube(const Grid& g, const Cube& outer, const Cube& inner);
// number of lattice points of q that fall inside r
long cube_overlap_points(const Grid& g, const Cube& a, const Cube& b);

enum class FamilyMode { all, dyadic, sampled };

// A cube family is a recipe, not a materialized list: `all` is every in-domain
// cube, `dyadic` restricts to power-of-two sides with aligned anchors, and
// `sampled` draws k cubes without replacement from the all-family.
struct CubeFamily {
  FamilyMode mode = FamilyMode::all;
  long sample_count = 0;
  std::uint64_t seed = 0;

  static CubeFamily all() { return CubeFamily{FamilyMode::all, 0, 0}; }
  static CubeFamily dyadic() { return CubeFamily{FamilyMode::dyadic, 0, 0}; }
  static CubeFamily sampled(long k, std::uint64_t seed) {
    return CubeFamily{FamilyMode::sampled, k, seed};
  }
};

// Closed-form count of the all-family (or dyadic) without enumerating.
long count_cubes(const Grid& g, const CubeFamily& fam);

// Deterministic order: side ascending, then anchor lexicographic.
std::vector<Cube> enumerate_cubes(const Grid& g, const CubeFamily& fam);

// Real values on a grid; construction rejects NaN/inf.  Instances are
// immutable so they can be shared freely.
class GridFunction {
 public:
  GridFunction(Grid g, std::vector<double> values);

  static GridFunction constant(const Grid& g, double c);
  static GridFunction from_fn(const Grid& g, const std::function<double(int, int)>& fn);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](long idx) const { return values_[idx]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  long size() const { return static_cast<long>(values_.size()); }

  GridFunction abs() const;
  GridFunction scaled(double c) const;
  GridFunction shifted(double c) const;
  GridFunction pointwise_mul(const GridFunction& other) const;
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

namespace detail {

// Unevaluated double-double value: hi + lo with |lo| <= ulp(hi)/2.
// Prefix tables keep ~32 significant digits so that box sums obtained by
// subtracting large cumulative values still agree with direct summation
// at the 1e-12 level even when the box sum is small.
struct TwoFloat {
  double hi = 0.0, lo = 0.0;
};

inline TwoFloat two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline TwoFloat tf_add(TwoFloat a, double b) {
  TwoFloat s = two_sum(a.hi, b);
  s.lo += a.lo;
  TwoFloat r = two_sum(s.hi, s.lo);
  return r;
}

inline TwoFloat tf_add(TwoFloat a, TwoFloat b) {
  TwoFloat s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  TwoFloat r = two_sum(s.hi, s.lo);
  return r;
}

inline TwoFloat tf_neg(TwoFloat a) { return {-a.hi, -a.lo}; }
inline TwoFloat tf_sub(TwoFloat a, TwoFloat b) { return tf_add(a, tf_neg(b)); }
inline double tf_value(TwoFloat a) { return a.hi + a.lo; }

}  // namespace detail

// Cumulative-sum table (summed-area table in 2D) built once per function;
// afterwards any axis-aligned box sum is O(1).
class PrefixTable {
 public:
  explicit PrefixTable(const GridFunction& f);

  const Grid& grid() const { return grid_; }
  // sum over the half-open box [i0,i1) x [j0,j1)
  double box_sum(int i0, int i1, int j0, int j1) const;
  double cube_sum(const Cube& q) const;
  double cube_mean(const Cube& q) const;

 private:
  detail::TwoFloat cell(int i, int j) const { return table_[static_cast<long>(i) * (grid_.shape[1] + 1) + j]; }
  Grid grid_;
  std::vector<detail::TwoFloat> table_;  // (shape0+1) x (shape1+1), zero border
};

// Validated exponent bundle: 1/q = 1/p - beta/n with p < n/beta, plus the
// auxiliary exponents used by the fractional-maximal bounds.
struct Exponents {
  double p = 2.0;
  double beta = 0.25;
  double q = 4.0;
  int n = 1;
  double r = 0.0;  // 0 means unset; else 1 < r < p
  double s = 0.0;  // 0 means unset; else s >= 1

  Exponents() = default;
  Exponents(double p_, double beta_, double q_, int n_, double r_ = 0.0, double s_ = 0.0);
  // derives q from (p, beta, n)
  static Exponents make(double p, double beta, int n, double r = 0.0, double s = 0.0);
};

// ---- grid_core operations ----

double cube_mean(const GridFunction& f, const Cube& q, const PrefixTable& via);
double cube_min(const GridFunction& f, const Cube& q);
// direct (non-prefix) summation in axis-major order; the oracle route
double cube_sum_direct(const GridFunction& f, const Cube& q);
double cube_mean_direct(const GridFunction& f, const Cube& q);
// f * indicator(q): values outside q set to 0
GridFunction restrict_to_cube(const GridFunction& f, const Cube& q);

// Deterministic RNG with explicit value mappings, so corpora and sampled
// families reproduce bit-for-bit from a seed on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next_u64() { return eng_(); }
  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  long uniform_index(long n);

 private:
  std::mt19937_64 eng_;
};

}  // namespace maxlip

#endif  // MAXLIP_GRID_HPP
