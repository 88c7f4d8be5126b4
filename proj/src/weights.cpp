#include "maxlip/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "maxlip/maximal.hpp"

namespace maxlip {

Weight::Weight(GridFunction w) : w_(std::move(w)) {
  for (double v : w_.values())
    if (!(v > 0.0)) throw std::invalid_argument("weight values must be strictly positive");
  table_ = std::make_shared<PrefixTable>(w_);
}

const GridFunction& Weight::power_values(double t) const {
  if (t == 1.0) return w_;
  auto it = pow_values_.find(t);
  if (it != pow_values_.end()) return *it->second;
  std::vector<double> v(static_cast<size_t>(w_.size()));
  for (long k = 0; k < w_.size(); ++k) v[static_cast<size_t>(k)] = std::pow(w_[k], t);
  auto fn = std::make_shared<GridFunction>(w_.grid(), std::move(v));
  pow_values_.emplace(t, fn);
  return *fn;
}

const PrefixTable& Weight::power_table(double t) const {
  if (t == 1.0) return *table_;
  auto it = pow_tables_.find(t);
  if (it != pow_tables_.end()) return *it->second;
  auto tab = std::make_shared<PrefixTable>(power_values(t));
  pow_tables_.emplace(t, tab);
  return *tab;
}

double Weight::measure(const Cube& q) const {
  return grid().cell_volume() * table_->cube_sum(q);
}

double Weight::power_measure(const Cube& q, double t) const {
  return grid().cell_volume() * power_table(t).cube_sum(q);
}

double weighted_measure(const Weight& mu, const Cube& q) { return mu.measure(q); }

double a1_constant(const Weight& w, const CubeFamily& family) {
  const Grid& g = w.grid();
  double best = 1.0;
  for (const Cube& q : enumerate_cubes(g, family)) {
    double ratio = w.table().cube_mean(q) / cube_min(w.values(), q);
    if (ratio > best) best = ratio;
  }
  if (family.mode == FamilyMode::all) {
    // the cube form and the pointwise form max M(w)/w coincide exactly;
    // a mismatch would indicate a defect in the maximal operator
    double pw = a1_constant_pointwise(w, family);
    if (std::fabs(pw - best) > 1e-12 * std::max(1.0, std::fabs(best)))
      throw std::logic_error("A1 cube form disagrees with pointwise form");
  }
  return best;
}

double a1_constant_pointwise(const Weight& w, const CubeFamily& family) {
  GridFunction mw = hl_maximal(w.values(), family).values;
  double best = 1.0;
  for (long k = 0; k < mw.size(); ++k) {
    double ratio = mw[k] / w.values()[k];
    if (ratio > best) best = ratio;
  }
  return best;
}

double ap_constant(const Weight& w, double p, const CubeFamily& family) {
  if (!(p > 1.0)) throw std::invalid_argument("Ap constant requires p > 1");
  const Grid& g = w.grid();
  const double t = 1.0 / (1.0 - p);  // conjugate-power exponent
  const PrefixTable& wt = w.table();
  const PrefixTable& wpt = w.power_table(t);
  double best = 0.0;
  for (const Cube& q : enumerate_cubes(g, family)) {
    double v = wt.cube_mean(q) * std::pow(wpt.cube_mean(q), p - 1.0);
    if (v > best) best = v;
  }
  return best;
}

Weight power_weight(const Grid& g, std::array<double, 2> center, double a, double eps) {
  if (!(a >= 0.0) || !(a < g.dim)) throw std::invalid_argument("power-weight exponent must lie in [0, dim)");
  if (!(eps > 0.0)) throw std::invalid_argument("power-weight regularization must be positive");
  GridFunction w = GridFunction::from_fn(g, [&](int i, int j) {
    double dx = i * g.h - center[0];
    double dy = g.dim ==  2 ? j * g.h - center[1] : 0.0;
    double d = std::sqrt(dx * dx + dy * dy);
    return std::pow(d + eps, -a);
  });
  return Weight(std::move(w));
}

Weight coifman_rochberg_weight(const GridFunction& f, double delta, const CubeFamily& family) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("Coifman-Rochberg exponent must lie in (0, 1)");
  double mx = f.max_abs();
  if (mx == 0.0) throw std::invalid_argument("cannot build a weight from the zero function");
  double floor = 1e-9 * mx;
  GridFunction mf = hl_maximal(f, family).values;
  std::vector<double> v(static_cast<size_t>(mf.size()));
  for (long k = 0; k < mf.size(); ++k) v[static_cast<size_t>(k)] = std::pow(mf[k] + floor, delta);
  return Weight(GridFunction(f.grid(), std::move(v)));
}

std::optional<Cube> dilate3(const Grid& g, const Cube& q) {
  Cube t{{q.anchor[0] - q.side, g.dim == 2 ? q.anchor[1] - q.side : 0}, 3 * q.side};
  if (!cube_in_grid(g, t)) return std::nullopt;
  return t;
}

double doubling_ratio(const Weight& w, const Cube& q) {
  require_cube_in_grid(w.grid(), q);
  std::optional<Cube> t = dilate3(w.grid(), q);
  if (!t) throw std::out_of_range("tripled cube does not fit inside the grid");
  return w.measure(*t) / w.measure(q);
}

}  // namespace maxlip
