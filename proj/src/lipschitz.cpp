#include "maxlip/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxlip/maximal.hpp"

namespace maxlip {

namespace {

void validate_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("smoothness beta must lie in (0,1)");
}

// (1/mu(Q)) * sum_Q |d|^s mu^(1-s) h^n, with the s = 1 inner power of mu
// short-circuited to 1
double inner_mean(const Grid& g, const std::vector<double>& diff,
                  const std::vector<long>& idxs, const Weight& mu, double s, double muq) {
  const double* pw = nullptr;
  if (s != 1.0) pw = mu.power_values(1.0 - s).values().data();
  double acc = 0.0;
  for (size_t k = 0; k < idxs.size(); ++k) {
    double t = s == 1.0 ? std::fabs(diff[k]) : std::pow(std::fabs(diff[k]), s);
    acc += pw ? t * pw[idxs[k]] : t;
  }
  return g.cell_volume() * acc / muq;
}

// generic driver: fills per-cube values of
// mu(Q)^(-beta/n) * inner_mean(...)^(1/s) where `diffs` supplies b - (center term)
template <class DiffFn>
std::vector<FunctionalProfile> char_functional_multi(const char* tag, const GridFunction& b,
                                                     const Weight& mu, double beta,
                                                     const std::vector<double>& s_list,
                                                     const CubeFamily& family, DiffFn&& diffs) {
  validate_beta(beta);
  const Grid& g = b.grid();
  if (!(g == mu.grid())) throw std::invalid_argument("weight grid mismatch");
  if (s_list.empty()) throw std::invalid_argument("need at least one exponent s");
  for (double s : s_list)
    if (!(s >= 1.0)) throw std::invalid_argument("functional exponent s must be >= 1");

  std::vector<Cube> cubes = enumerate_cubes(g, family);
  std::vector<FunctionalProfile> out(s_list.size());
  for (size_t t = 0; t < s_list.size(); ++t) {
    out[t].tag = tag;
    out[t].beta = beta;
    out[t].s = s_list[t];
    out[t].entries.reserve(cubes.size());
  }

  std::vector<long> idxs;
  std::vector<double> diff;
  for (const Cube& q : cubes) {
    BoxExtent box = cube_box(g, q);
    idxs.clear();
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j) idxs.push_back(g.index(i, j));
    diffs(q, idxs, diff);

    double muq = mu.measure(q);
    for (size_t t = 0; t < s_list.size(); ++t) {
      double s = s_list[t];
      double v = std::pow(muq, -beta / g.dim) *
                 std::pow(inner_mean(g, diff, idxs, mu, s, muq), 1.0 / s);
      out[t].entries.push_back(FunctionalEntry{q, v});
    }
  }
  for (auto& prof : out) {
    double sup = 0.0;
    Cube witness = cubes.empty() ? Cube{} : cubes.front();
    for (const auto& e : prof.entries)
      if (e.value > sup) {
        sup = e.value;
        witness = e.cube;
      }
    prof.sup = sup;
    prof.witness = witness;
  }
  return out;
}

}  // namespace

LipNormResult lip_norm(const GridFunction& b, const Weight& mu, double beta, double p,
                       const CubeFamily& family) {
  validate_beta(beta);
  if (!(p >= 1.0)) throw std::invalid_argument("lipschitz exponent p must be >= 1");
  const Grid& g = b.grid();
  if (!(g == mu.grid())) throw std::invalid_argument("weight grid mismatch");

  PrefixTable btab(b);
  const double* pw = nullptr;
  if (p != 1.0) pw = mu.power_values(1.0 - p).values().data();

  LipNormResult res;
  res.beta = beta;
  res.p = p;
  bool first = true;
  for (const Cube& q : enumerate_cubes(g, family)) {
    double bq = btab.cube_mean(q);
    double muq = mu.measure(q);
    BoxExtent box = cube_box(g, q);
    double acc = 0.0;
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j) {
        double d = std::fabs(b.at(i, j) - bq);
        double t = p == 1.0 ? d : std::pow(d, p);
        acc += pw ? t * pw[g.index(i, j)] : t;
      }
    double inner = g.cell_volume() * acc / muq;
    double v = std::pow(muq, -beta / g.dim) * std::pow(inner, 1.0 / p);
    if (first || v > res.value) {
      res.value = v;
      res.witness = q;
      first = false;
    }
  }
  if (first) throw std::invalid_argument("empty cube family");
  return res;
}

std::vector<LipNormResult> lip_norm_equivalence_table(const GridFunction& b, const Weight& mu,
                                                      double beta, const CubeFamily& family,
                                                      const std::vector<double>& p_list) {
  std::vector<LipNormResult> out;
  out.reserve(p_list.size());
  for (double p : p_list) out.push_back(lip_norm(b, mu, beta, p, family));
  return out;
}

double pointwise_lip_constant(const GridFunction& b, const Weight& w, double beta) {
  validate_beta(beta);
  const Grid& g = b.grid();
  if (!(g == w.grid())) throw std::invalid_argument("weight grid mismatch");
  double norm = lip_norm(b, w, beta, 1.0, CubeFamily::all()).value;
  if (norm == 0.0) return 0.0;  // constant b by convention

  const double hn = g.cell_volume();
  double best = 0.0;
  for (int i1 = 0; i1 < g.shape[0]; ++i1)
    for (int j1 = 0; j1 < g.shape[1]; ++j1)
      for (int i2 = 0; i2 < g.shape[0]; ++i2)
        for (int j2 = 0; j2 < g.shape[1]; ++j2) {
          if (i1 == i2 && j1 == j2) continue;
          int d = std::max(std::abs(i1 - i2), std::abs(j1 - j2));
          int lo0 = std::max(0, i1 - d), hi0 = std::min(g.shape[0], i1 + d + 1);
          int lo1 = g.dim == 2 ? std::max(0, j1 - d) : 0;
          int hi1 = g.dim == 2 ? std::min(g.shape[1], j1 + d + 1) : 1;
          double wb = hn * w.table().box_sum(lo0, hi0, lo1, hi1);
          double num = std::fabs(b.at(i1, j1) - b.at(i2, j2));
          double den = norm * std::pow(wb, beta / g.dim) *
                       (w.values().at(i1, j1) + w.values().at(i2, j2));
          double c = num / den;
          if (c > best) best = c;
        }
  return best;
}

double oscillation_bound_constant(const GridFunction& b, const Weight& w, double beta,
                                  const CubeFamily& family) {
  validate_beta(beta);
  const Grid& g = b.grid();
  if (!(g == w.grid())) throw std::invalid_argument("weight grid mismatch");
  double norm = lip_norm(b, w, beta, 1.0, CubeFamily::all()).value;
  if (norm == 0.0) return 0.0;

  PrefixTable btab(b);
  double best = 0.0;
  for (const Cube& q : enumerate_cubes(g, family)) {
    double bq = btab.cube_mean(q);
    double wq = w.measure(q);
    double scale = norm * std::pow(wq, beta / g.dim);
    BoxExtent box = cube_box(g, q);
    for (int i = box.i0; i < box.i1; ++i)
      for (int j = box.j0; j < box.j1; ++j) {
        double c = std::fabs(b.at(i, j) - bq) / (scale * w.values().at(i, j));
        if (c > best) best = c;
      }
  }
  return best;
}

std::vector<FunctionalProfile> maximal_char_functional_multi(const GridFunction& b,
                                                             const Weight& mu, double beta,
                                                             const std::vector<double>& s_list,
                                                             const CubeFamily& family) {
  return char_functional_multi("maximal_char", b, mu, beta, s_list, family,
                               [&](const Cube& q, const std::vector<long>& idxs,
                                   std::vector<double>& diff) {
                                 OperatorOutput mq = restricted_maximal(b, q, CubeFamily::all());
                                 diff.resize(idxs.size());
                                 for (size_t k = 0; k < idxs.size(); ++k)
                                   diff[k] = b[idxs[k]] - mq.values[idxs[k]];
                               });
}

FunctionalProfile maximal_char_functional(const GridFunction& b, const Weight& mu, double beta,
                                          double s, const CubeFamily& family) {
  return maximal_char_functional_multi(b, mu, beta, {s}, family).front();
}

std::vector<FunctionalProfile> sharp_char_functional_multi(const GridFunction& b,
                                                           const Weight& mu, double beta,
                                                           const std::vector<double>& s_list,
                                                           const CubeFamily& family) {
  return char_functional_multi("sharp_char", b, mu, beta, s_list, family,
                               [&](const Cube& q, const std::vector<long>& idxs,
                                   std::vector<double>& diff) {
                                 GridFunction bq = restrict_to_cube(b, q);
                                 OperatorOutput sh = sharp_maximal(bq, CubeFamily::all());
                                 diff.resize(idxs.size());
                                 for (size_t k = 0; k < idxs.size(); ++k)
                                   diff[k] = b[idxs[k]] - 2.0 * sh.values[idxs[k]];
                               });
}

FunctionalProfile sharp_char_functional(const GridFunction& b, const Weight& mu, double beta,
                                        double s, const CubeFamily& family) {
  return sharp_char_functional_multi(b, mu, beta, {s}, family).front();
}

}  // namespace maxlip
