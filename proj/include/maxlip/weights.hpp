#ifndef MAXLIP_WEIGHTS_HPP
#define MAXLIP_WEIGHTS_HPP

#include <array>
#include <map>
#include <memory>
#include <optional>

#include "maxlip/grid.hpp"

namespace maxlip {

// Strictly positive grid function with cached prefix tables for itself and for
// the powers mu^t requested so far.  Powers appear throughout the weighted
// norms (mu^(1-p), mu^(1/(1-p)), ...), so they are built lazily and memoized.
class Weight {
 public:
  explicit Weight(GridFunction w);

  const Grid& grid() const { return w_.grid(); }
  const GridFunction& values() const { return w_; }
  const PrefixTable& table() const { return *table_; }

  // mu^t as a grid function (t = 1 returns the weight itself)
  const GridFunction& power_values(double t) const;
  const PrefixTable& power_table(double t) const;

  // weighted measure mu(Q) = h^n * sum of mu over Q's lattice points
  double measure(const Cube& q) const;
  // h^n * sum of mu^t over Q
  double power_measure(const Cube& q, double t) const;

 private:
  GridFunction w_;
  std::shared_ptr<PrefixTable> table_;
  // keyed by the exact double exponent; mutable for lazy fill
  mutable std::map<double, std::shared_ptr<GridFunction>> pow_values_;
  mutable std::map<double, std::shared_ptr<PrefixTable>> pow_tables_;
};

double weighted_measure(const Weight& mu, const Cube& q);

// A1 characteristic sup_Q mean_Q(w) / min_Q(w), the discrete essential
// infimum being the lattice minimum.
double a1_constant(const Weight& w, const CubeFamily& family);

// Equivalent pointwise form max_x M(w)(x) / w(x); equals a1_constant exactly
// for the same family.
double a1_constant_pointwise(const Weight& w, const CubeFamily& family);

// Ap characteristic sup_Q mean_Q(w) * mean_Q(w^(1/(1-p)))^(p-1), p > 1.
double ap_constant(const Weight& w, double p, const CubeFamily& family);

// w(x) = (|x - c| + eps)^(-a) with Euclidean distance on grid coordinates.
// For 0 < a < n and small eps this is the standard A1 example.
Weight power_weight(const Grid& g, std::array<double, 2> center, double a, double eps);

// (M f + floor)^delta for 0 < delta < 1, with floor = 1e-9 * max|f| keeping
// the weight strictly positive; an A1 weight by the Coifman-Rochberg
// construction.
Weight coifman_rochberg_weight(const GridFunction& f, double delta,
                               const CubeFamily& family);

// Concentric triple of q (side 3s, anchor shifted by -s per axis), or nullopt
// when it does not fit inside the grid.
std::optional<Cube> dilate3(const Grid& g, const Cube& q);

// w(3Q)/w(Q); throws std::out_of_range when the triple leaves the grid.
double doubling_ratio(const Weight& w, const Cube& q);

}  // namespace maxlip

#endif  // MAXLIP_WEIGHTS_HPP
