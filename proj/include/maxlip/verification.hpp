#ifndef MAXLIP_VERIFICATION_HPP
#define MAXLIP_VERIFICATION_HPP

#include <map>
#include <string>
#include <vector>

#include "maxlip/corpus.hpp"
#include "maxlip/grid.hpp"
#include "maxlip/lipschitz.hpp"
#include "maxlip/weights.hpp"

namespace maxlip {

// (sum |f|^p mu h^n)^(1/p)
double weighted_lp_norm(const GridFunction& f, double p, const Weight& mu);
// same with density mu^t instead of mu; t = 1-q gives the commutator target norm
double weighted_lp_norm(const GridFunction& f, double p, const Weight& mu, double t);

enum class OperatorTag { maximal_commutator, commutator_maximal, commutator_sharp, fractional };
const char* tag_name(OperatorTag tag);

// Empirical operator norm: sup over corpus pairs of
// ||op f||_target / ||f||_{L^p(mu)}.  The target norm is L^q(mu^(1-q)) for the
// commutator-type operators and L^q(mu) for the fractional one.
struct NormEstimate {
  OperatorTag op = OperatorTag::maximal_commutator;
  Exponents exponents;
  double sup_ratio = 0.0;
  std::string witness;  // "b=<name>,f=<name>" (or "f=<name>")
  long n_samples = 0;   // pairs actually evaluated
  long n_skipped = 0;   // pairs dropped for a zero denominator
};

NormEstimate estimate_operator_norm(OperatorTag tag, const Corpus& corpus, const Exponents& e,
                                    const Weight& mu, const CubeFamily& family = CubeFamily::all());

// One violated check: which members, where, and the two side values.
struct Failure {
  std::string context;   // "b=...,f=...,w=..." as applicable
  Cube cube{{0, 0}, 0};  // witness cube; side 0 when the check is not cube-indexed
  long point = -1;       // lattice index of the witness point, -1 if none
  double lhs = 0.0;
  double rhs = 0.0;
};

// Outcome of one suite.  `failures` empty means the suite passed;
// expected-failure controls and infeasible configurations land in `notes`,
// empirical supremum-type outputs in `metrics`.
struct VerificationReport {
  std::string suite;
  long cases = 0;
  std::vector<Failure> failures;
  double worst_slack = 0.0;  // most adverse signed slack seen across all checks
  std::vector<std::string> notes;
  std::map<std::string, double> metrics;

  bool passed() const { return failures.empty(); }
};

// |[b,M]f| <= M_b f and |[b,M#]f| <= 2 M_b f at every point, for every
// nonnegative corpus symbol; sign-changing symbols are expected-failure
// controls whose violations are counted in notes/metrics, not failures.
VerificationReport verify_pointwise_domination(const Corpus& corpus,
                                               const CubeFamily& family = CubeFamily::all());

// The cube-restriction identities, per cube of `family`:
//   (i)   M(chi_Q) = 1 on Q, exactly;
//   (ii)  M(b chi_Q) = M_Q(b) on Q, 1e-12;
//   (iii) M#(chi_Q) <= 1/2 everywhere, with equality at points carrying a
//         half-overlap cube (feasibility established by search);
//   (iv)  |b_Q| <= 2 M#(b chi_Q) on Q whenever some in-domain cube R contains
//         Q with exactly twice its points; infeasible Q are logged, not failed.
VerificationReport verify_restriction_identities(const Corpus& corpus,
                                                 const CubeFamily& family = CubeFamily::all());

// With E = {x in Q : b <= b_Q} and F its complement in Q, the two integrals
// int_E (b_Q - b) and int_F (b - b_Q) agree (discrete mean balance).
VerificationReport verify_mean_split(const Corpus& corpus,
                                     const CubeFamily& family = CubeFamily::all());

// The three inequality links behind the converse characterization, per cube:
//   (a) mu(Q)^(-1-beta/n) int_Q |b - b_Q|  <=  same prefactor int_Q M_b(chi_Q);
//   (b) int_Q |b - b_Q|  <=  2 int_Q |b - M_Q(b)|   (needs b >= 0; signed
//       symbols are controls);
//   (c) mu(Q)^(-1-beta/n) int_Q |b - M_Q(b)|  <=  per-cube maximal
//       characterizing functional value with exponent q  (discrete Holder).
VerificationReport verify_converse_chain(const Corpus& corpus, const CubeFamily& family,
                                         const Exponents& e, const Weight& mu);

// Per-cube monotonicity in s of both characterizing functionals over every
// (symbol, weight) pair of the corpus, with 1e-9 relative slack.
VerificationReport verify_holder_monotonicity(const Corpus& corpus, const CubeFamily& family,
                                              double beta, const std::vector<double>& s_list);

// For nonnegative symbols, exponents with 1/q = 1/p - beta/n, and every cube:
// the maximal characterizing functional at exponent q equals
//   mu(Q)^(-1/p) * ( sum_Q |[b,M](chi_Q)|^q mu^(1-q) h^n )^(1/q)
// to 1e-12 relative (composition of the two restriction identities).
VerificationReport verify_commutator_identity(const Corpus& corpus, const CubeFamily& family,
                                              const Exponents& e, const Weight& mu);

// Empirical constants of the two averaged bounds
//   mean_Q |f|            <=  C w(Q)^(-beta/n) Mfrac(f)(x)          (ratio1)
//   mean_Q |b - b_Q| |f|  <=  C ||b|| M(w)(x) Mfrac(f)(x)           (ratio2)
// over all (w, f, b, Q, x in Q); Mfrac is the weighted fractional maximal
// operator of order beta with averaging exponent r.  Zero denominators are
// skipped and counted; more than 50% skipped is an error.
VerificationReport verify_averaged_ratio_bounds(const Corpus& corpus, const CubeFamily& family,
                                                double beta, double r);

// Empirical constant of the pointwise domination
//   M_b(f)(x) <= C ||b|| w(x) Mfrac(f)(x), same skipping rules.
VerificationReport verify_fractional_domination(const Corpus& corpus, const CubeFamily& family,
                                                double beta, double r);

// ---- experiments ----

// One refinement level of the shrinking-cube tables: a fixed 5-point cube
// around the same interior point x0, sampled at n points.
struct RefinementRow {
  int n = 0;            // lattice points at this level
  double h = 0.0;
  double q_measure = 0.0;  // |Q| of the 5-point cube
  double lhs_neg = 0.0;    // mean_Q b^-
  double rhs_neg = 0.0;    // C_max |Q|^(beta/n) (mean_Q mu)^(1+beta/n)
  double lhs_mix = 0.0;    // |b_Q| - mean_Q b^+ + mean_Q b^-
  double rhs_mix = 0.0;    // C_sharp |Q|^(beta/n) (mean_Q mu)^(1+beta/n)
};

struct RefinementTable {
  std::string profile;       // which closed-form symbol was sampled
  double beta = 0.0;
  double limit_value = 0.0;  // b^-(x0) of the continuum profile
  std::vector<RefinementRow> rows;
  double rhs_neg_slope = 0.0;    // log-log slope of rhs_neg against |Q|
  double expected_slope = 0.0;   // beta/n
  bool rhs_neg_decreasing = false;
};

struct RefinementExperiment {
  Exponents exponents;
  std::vector<int> levels;
  std::vector<RefinementTable> tables;  // smooth profile, then signed control
};

// Shrinking-cube tables for the negative-part and mixed-mean bounds, with the
// per-level constants taken as the characterizing-functional sups over the
// dyadic family and mu = 1.  Levels must contain at least two entries; each
// level n must put x0 = 0.5 on the lattice (n = 1 mod 4).
RefinementExperiment refinement_experiment(const Exponents& e, const std::vector<int>& levels);

// Coarse-vs-fine values of the empirical-constant metrics on the profile
// corpus: oscillation-bound constant, the two ratio-suite sups, the
// fractional-domination sup, the M_b norm estimate divided by ||b||, and the
// log-profile norm (expected to grow).
struct StabilityResult {
  Exponents exponents;
  int n_coarse = 0;
  int n_fine = 0;
  std::map<std::string, double> coarse;
  std::map<std::string, double> fine;
  std::map<std::string, double> ratio;  // fine / coarse
};

StabilityResult stability_experiment(const Exponents& e, int n_coarse, int n_fine);

}  // namespace maxlip

#endif  // MAXLIP_VERIFICATION_HPP
