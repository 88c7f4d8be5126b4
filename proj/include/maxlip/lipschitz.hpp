#ifndef MAXLIP_LIPSCHITZ_HPP
#define MAXLIP_LIPSCHITZ_HPP

#include <string>
#include <vector>

#include "maxlip/grid.hpp"
#include "maxlip/weights.hpp"

namespace maxlip {

// Value of a weighted Lipschitz seminorm together with the cube attaining it.
struct LipNormResult {
  double value = 0.0;
  Cube witness{};
  double beta = 0.0;
  double p = 1.0;
};

// Per-cube values of a cube-indexed functional, in enumeration order,
// plus its supremum and the first cube attaining it.
struct FunctionalEntry {
  Cube cube;
  double value = 0.0;
};

struct FunctionalProfile {
  std::string tag;
  std::vector<FunctionalEntry> entries;
  double sup = 0.0;
  Cube witness{};
  double beta = 0.0;
  double s = 1.0;
};

// Weighted Lipschitz seminorm: sup over the family of
//   mu(Q)^(-beta/n) * ( (1/mu(Q)) * sum_Q |b - b_Q|^p mu^(1-p) h^n )^(1/p)
// with b_Q the plain (unweighted) mean of b over Q.
LipNormResult lip_norm(const GridFunction& b, const Weight& mu, double beta, double p,
                       const CubeFamily& family);

// The same norm across a list of p values (the norms are mutually equivalent;
// the ratios are empirical).
std::vector<LipNormResult> lip_norm_equivalence_table(const GridFunction& b, const Weight& mu,
                                                      double beta, const CubeFamily& family,
                                                      const std::vector<double>& p_list);

// Largest constant observed in the pointwise two-point bound
//   |b(x)-b(y)| <= C * ||b|| * w(B(x,|x-y|))^(beta/n) * (w(x)+w(y)),
// where B is the lattice box centered at x of half-side the l-infinity index
// distance, clipped to the domain.  Returns 0 for constant b.
double pointwise_lip_constant(const GridFunction& b, const Weight& w, double beta);

// Largest constant observed in the oscillation bound
//   |b(x)-b_Q| <= C * ||b|| * w(Q)^(beta/n) * w(x)  over (Q, x in Q).
double oscillation_bound_constant(const GridFunction& b, const Weight& w, double beta,
                                  const CubeFamily& family);

// Characterizing functional built from the cube-restricted maximal function:
// per cube, mu(Q)^(-beta/n) * ((1/mu(Q)) * sum_Q |b - M_Q(b)|^s mu^(1-s) h^n)^(1/s).
// M_Q(b) always uses the full subcube family of Q.
FunctionalProfile maximal_char_functional(const GridFunction& b, const Weight& mu, double beta,
                                          double s, const CubeFamily& family);

// Same per-cube machinery evaluated for several exponents s at once
// (M_Q(b) is computed once per cube).
std::vector<FunctionalProfile> maximal_char_functional_multi(const GridFunction& b,
                                                             const Weight& mu, double beta,
                                                             const std::vector<double>& s_list,
                                                             const CubeFamily& family);

// Characterizing functional built from the sharp function of b restricted to
// the cube: per cube, mu(Q)^(-beta/n) * ((1/mu(Q)) * sum_Q |b - 2 M#(b chi_Q)|^s
// mu^(1-s) h^n)^(1/s), with M# taken over the global all-family.
FunctionalProfile sharp_char_functional(const GridFunction& b, const Weight& mu, double beta,
                                        double s, const CubeFamily& family);

std::vector<FunctionalProfile> sharp_char_functional_multi(const GridFunction& b,
                                                           const Weight& mu, double beta,
                                                           const std::vector<double>& s_list,
                                                           const CubeFamily& family);

}  // namespace maxlip

#endif  // MAXLIP_LIPSCHITZ_HPP
