#ifndef MAXLIP_MAXIMAL_HPP
#define MAXLIP_MAXIMAL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "maxlip/grid.hpp"

namespace maxlip {

class Weight;

// Result of a maximal-type operator.  `values` holds the computed number at
// every lattice point; for operators defined only on part of the grid the
// `defined` mask distinguishes true zeros from absent points.  When argmax
// recording is requested, `argmax[i]` is the first cube in enumeration order
// attaining the supremum at point i.
struct OperatorOutput {
  GridFunction values;
  std::vector<std::uint8_t> defined;  // empty means defined everywhere
  std::vector<Cube> argmax;           // empty unless recording was requested

  bool everywhere_defined() const { return defined.empty(); }
  bool is_defined(long idx) const { return defined.empty() || defined[static_cast<size_t>(idx)] != 0; }
  // value at a defined point; throws std::out_of_range on absent points
  double value_at(long idx) const;
  bool has_argmax() const { return !argmax.empty(); }
};

// Hardy-Littlewood maximal function: sup over cubes of the family containing
// x of the mean of |f| over the cube.
OperatorOutput hl_maximal(const GridFunction& f, const CubeFamily& family,
                          bool record_argmax = false);

// Maximal function restricted to subcubes of q0; defined only on q0.
// The family is interpreted as the grid family filtered to cubes inside q0.
OperatorOutput restricted_maximal(const GridFunction& f, const Cube& q0,
                                  const CubeFamily& family, bool record_argmax = false);

// Sharp maximal function: sup of the mean oscillation mean_Q |f - f_Q|.
OperatorOutput sharp_maximal(const GridFunction& f, const CubeFamily& family,
                             bool record_argmax = false);

// Maximal commutator: at x, sup over Q containing x of mean_Q |b(x)-b(y)| |f(y)|.
OperatorOutput maximal_commutator(const GridFunction& b, const GridFunction& f,
                                  const CubeFamily& family, bool record_argmax = false);

// Nonlinear commutator b * M(f) - M(b f); can take either sign.
GridFunction commutator_maximal(const GridFunction& b, const GridFunction& f,
                                const CubeFamily& family);

// Nonlinear commutator with the sharp function: b * M#(f) - M#(b f).
GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f,
                              const CubeFamily& family);

// Weighted fractional maximal operator:
// sup over Q containing x of ( mu(Q)^(r*alpha/n - 1) * integral_Q |f|^r mu )^(1/r).
OperatorOutput weighted_fractional_maximal(const GridFunction& f, const Weight& mu,
                                           double alpha, double r, const CubeFamily& family,
                                           bool record_argmax = false);

// Brute-force counterparts.  They share no summation machinery with the
// accelerated paths (direct loops, no prefix tables) and exist as oracles.
OperatorOutput hl_maximal_ref(const GridFunction& f, const CubeFamily& family);
OperatorOutput restricted_maximal_ref(const GridFunction& f, const Cube& q0,
                                      const CubeFamily& family);
OperatorOutput sharp_maximal_ref(const GridFunction& f, const CubeFamily& family);
OperatorOutput maximal_commutator_ref(const GridFunction& b, const GridFunction& f,
                                      const CubeFamily& family);
GridFunction commutator_maximal_ref(const GridFunction& b, const GridFunction& f,
                                    const CubeFamily& family);
GridFunction commutator_sharp_ref(const GridFunction& b, const GridFunction& f,
                                  const CubeFamily& family);
OperatorOutput weighted_fractional_maximal_ref(const GridFunction& f, const Weight& mu,
                                               double alpha, double r, const CubeFamily& family);

}  // namespace maxlip

#endif  // MAXLIP_MAXIMAL_HPP
