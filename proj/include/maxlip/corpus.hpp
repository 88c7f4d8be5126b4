#ifndef MAXLIP_CORPUS_HPP
#define MAXLIP_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maxlip/grid.hpp"
#include "maxlip/weights.hpp"

namespace maxlip {

struct CorpusFunction {
  std::string name;
  GridFunction values;
  bool nonnegative = false;
};

struct CorpusWeight {
  std::string name;
  Weight weight;
  double a1 = 1.0;  // all-family A1 constant, computed on build
};

// Deterministic test corpus: input functions f, symbols b (with nonnegativity
// flags; the sign-changing members are expected-failure controls for the
// b >= 0 hypotheses), and a set of weights.
struct Corpus {
  std::uint64_t seed = 0;
  Grid grid;
  std::vector<CorpusFunction> functions;
  std::vector<CorpusFunction> symbols;
  std::vector<CorpusWeight> weights;

  // corpus with only the b >= 0 symbols retained
  Corpus nonneg_symbol_subset() const;
};

// Reproducible corpus on the given grid: indicators of random cubes, ramps,
// bumps, random fields and an oscillatory profile as f's; smooth, Holder-rough
// (exponents 0.3 / 0.7), log-profile and sign-changing symbols as b's; the
// unit weight, two power weights and two Coifman-Rochberg weights.
Corpus build_corpus(std::uint64_t seed, const Grid& grid);

// Closed-form 1D profiles on [0, 2] used by the refinement and stability
// experiments; sampling the same formulas at different resolutions realizes
// "the same continuum profile on a finer grid".
namespace profiles {
// 1 + sin^2(pi x / 2): smooth, >= 1, negative part zero
double b_smooth(double x);
// x - 1: sign-changing; its negative part at x0 = 0.5 equals 0.5
double b_control(double x);
// log(4 / (|x - 1| + reg)): the classical at-the-edge-of-Lipschitz profile;
// reg is the lattice regularization (h/4 when sampled at spacing h)
double b_log(double x, double reg);
double f_bump(double x);
double f_osc(double x);
double f_ramp(double x);
}  // namespace profiles

// The profile corpus sampled at n points (grid [0, 2], spacing 2/(n-1)):
// symbols = {smooth b}, functions = four fixed f profiles, weights = unit and
// a regularized power weight.  The log profile is exposed separately; it is
// deliberately excluded from the ratio suites and only its own norm growth is
// tracked under refinement.
struct ProfileCorpus {
  Corpus corpus;
  GridFunction b_log;
};
ProfileCorpus sample_profiles(int n);

}  // namespace maxlip

#endif  // MAXLIP_CORPUS_HPP
