#include "maxlip/corpus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace maxlip {

namespace {

Cube random_cube(Rng& rng, const Grid& g) {
  int side = 1 + static_cast<int>(rng.uniform_index(g.max_side()));
  Cube q{{0, 0}, side};
  q.anchor[0] = static_cast<int>(rng.uniform_index(g.shape[0] - side + 1));
  if (g.dim == 2) q.anchor[1] = static_cast<int>(rng.uniform_index(g.shape[1] - side + 1));
  return q;
}

std::array<double, 2> random_point(Rng& rng, const Grid& g) {
  return {rng.uniform(0.0, (g.shape[0] - 1) * g.h),
          g.dim == 2 ? rng.uniform(0.0, (g.shape[1] - 1) * g.h) : 0.0};
}

double dist(const Grid& g, int i, int j, const std::array<double, 2>& c) {
  double dx = i * g.h - c[0];
  double dy = g.dim == 2 ? j * g.h - c[1] : 0.0;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Corpus Corpus::nonneg_symbol_subset() const {
  Corpus out = *this;
  out.symbols.clear();
  for (const auto& s : symbols)
    if (s.nonnegative) out.symbols.push_back(s);
  return out;
}

Corpus build_corpus(std::uint64_t seed, const Grid& g) {
  Rng rng(seed);
  Corpus c;
  c.seed = seed;
  c.grid = g;

  const double lx = (g.shape[0] - 1) * g.h;
  const double ly = g.dim == 2 ? (g.shape[1] - 1) * g.h : 0.0;
  const double diam = std::sqrt(lx * lx + ly * ly);
  const double span = lx + ly;  // > 0: grids have at least two points per axis

  // ---- input functions ----
  Cube qa = random_cube(rng, g), qb = random_cube(rng, g);
  GridFunction one = GridFunction::constant(g, 1.0);
  c.functions.push_back({"chi_a", restrict_to_cube(one, qa), true});
  c.functions.push_back({"chi_b", restrict_to_cube(one, qb), true});
  c.functions.push_back({"ramp",
                         GridFunction::from_fn(g,
                                               [&](int i, int j) {
                                                 double v = i * g.h;
                                                 if (g.dim == 2) v += j * g.h;
                                                 return v / span;
                                               }),
                         true});
  std::array<double, 2> bc = random_point(rng, g);
  const double sigma = diam / 6.0 + g.h;
  c.functions.push_back({"bump",
                         GridFunction::from_fn(g,
                                               [&](int i, int j) {
                                                 double d = dist(g, i, j, bc);
                                                 return std::exp(-d * d / (2.0 * sigma * sigma));
                                               }),
                         true});
  c.functions.push_back(
      {"noise_a", GridFunction::from_fn(g, [&](int, int) { return rng.uniform(); }), true});
  c.functions.push_back(
      {"noise_b", GridFunction::from_fn(g, [&](int, int) { return rng.uniform(); }), true});
  int kx = 1 + static_cast<int>(rng.uniform_index(3));
  int ky = 1 + static_cast<int>(rng.uniform_index(3));
  c.functions.push_back({"wave",
                         GridFunction::from_fn(g,
                                               [&](int i, int j) {
                                                 double v = std::sin(2.0 * std::numbers::pi * kx *
                                                                     i / g.shape[0]);
                                                 if (g.dim == 2)
                                                   v *= std::cos(2.0 * std::numbers::pi * ky * j /
                                                                 g.shape[1]);
                                                 return v;
                                               }),
                         false});
  long spike = static_cast<long>(rng.uniform_index(g.point_count()));
  c.functions.push_back({"spike",
                         GridFunction::from_fn(
                             g, [&](int i, int j) { return g.index(i, j) == spike ? 3.0 : 0.0; }),
                         true});

  // ---- symbols ----
  std::array<double, 2> sc = random_point(rng, g);
  c.symbols.push_back({"b_smooth",
                       GridFunction::from_fn(g,
                                             [&](int i, int j) {
                                               double d = dist(g, i, j, sc);
                                               return 0.5 +
                                                      std::exp(-d * d / (2.0 * sigma * sigma));
                                             }),
                       true});
  std::array<double, 2> hc1 = random_point(rng, g), hc2 = random_point(rng, g);
  c.symbols.push_back({"b_holder_03",
                       GridFunction::from_fn(
                           g, [&](int i, int j) { return std::pow(dist(g, i, j, hc1), 0.3); }),
                       true});
  c.symbols.push_back({"b_holder_07",
                       GridFunction::from_fn(
                           g, [&](int i, int j) { return std::pow(dist(g, i, j, hc2), 0.7); }),
                       true});
  std::array<double, 2> logc = random_point(rng, g);
  c.symbols.push_back({"b_log",
                       GridFunction::from_fn(g,
                                             [&](int i, int j) {
                                               double d = dist(g, i, j, logc);
                                               return std::log((diam + g.h) / (d + g.h / 2.0));
                                             }),
                       true});
  const double mid = span / 2.0;
  c.symbols.push_back({"b_signed_ramp",
                       GridFunction::from_fn(g,
                                             [&](int i, int j) {
                                               double v = i * g.h;
                                               if (g.dim == 2) v += j * g.h;
                                               return v - mid;
                                             }),
                       false});
  c.symbols.push_back({"b_signed_noise",
                       GridFunction::from_fn(g, [&](int, int) { return rng.uniform(-1.0, 1.0); }),
                       false});

  // ---- weights ----
  const CubeFamily all = CubeFamily::all();
  std::array<double, 2> wmid{lx / 2.0, g.dim == 2 ? ly / 2.0 : 0.0};
  auto add_weight = [&](const std::string& name, Weight w) {
    double a1 = a1_constant(w, all);
    c.weights.push_back({name, std::move(w), a1});
  };
  add_weight("w_unit", Weight(GridFunction::constant(g, 1.0)));
  add_weight("w_power_025", power_weight(g, wmid, 0.25, g.h / 2.0));
  add_weight("w_power_05", power_weight(g, wmid, 0.5, g.h / 2.0));
  add_weight("w_cr_bump", coifman_rochberg_weight(c.functions[3].values, 0.5, all));
  add_weight("w_cr_noise", coifman_rochberg_weight(c.functions[4].values, 0.3, all));

  return c;
}

namespace profiles {

double b_smooth(double x) {
  double s = std::sin(std::numbers::pi * x / 2.0);
  return 1.0 + s * s;
}

double b_control(double x) { return x - 1.0; }

double b_log(double x, double reg) { return std::log(4.0 / (std::fabs(x - 1.0) + reg)); }

double f_bump(double x) { return std::exp(-8.0 * (x - 0.8) * (x - 0.8)); }

double f_osc(double x) { return 1.2 + std::sin(1.5 * std::numbers::pi * x); }

double f_ramp(double x) { return 0.5 * x; }

}  // namespace profiles

ProfileCorpus sample_profiles(int n) {
  if (n < 5) throw std::invalid_argument("profile grids need at least 5 points");
  Grid g = Grid::line(n, 2.0 / (n - 1));
  auto sample = [&](double (*fn)(double)) {
    return GridFunction::from_fn(g, [&](int i, int) { return fn(i * g.h); });
  };

  Corpus c;
  c.seed = 0;
  c.grid = g;
  c.symbols.push_back({"b_smooth", sample(&profiles::b_smooth), true});
  c.functions.push_back({"f_bump", sample(&profiles::f_bump), true});
  c.functions.push_back({"f_osc", sample(&profiles::f_osc), true});
  c.functions.push_back({"f_ramp", sample(&profiles::f_ramp), true});
  c.functions.push_back({"f_chi",
                         GridFunction::from_fn(g,
                                               [&](int i, int) {
                                                 double x = i * g.h;
                                                 return (x >= 0.75 && x <= 1.25) ? 1.0 : 0.0;
                                               }),
                         true});
  const CubeFamily all = CubeFamily::all();
  Weight unit(GridFunction::constant(g, 1.0));
  double a1u = a1_constant(unit, all);
  c.weights.push_back({"w_unit", std::move(unit), a1u});
  Weight pw = power_weight(g, {1.0, 0.0}, 0.5, 0.05);
  double a1p = a1_constant(pw, all);
  c.weights.push_back({"w_power", std::move(pw), a1p});

  GridFunction blog =
      GridFunction::from_fn(g, [&](int i, int) { return profiles::b_log(i * g.h, g.h / 4.0); });
  return ProfileCorpus{std::move(c), std::move(blog)};
}

}  // namespace maxlip
