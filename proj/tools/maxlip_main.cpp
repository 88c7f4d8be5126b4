// Batch command-line surface: compute operators, evaluate norms and
// functionals, run verification suites and experiments, emit CSV/JSON tables.
//
// Exit codes: 0 success / suite pass, 1 suite failure, 2 usage or input error.
// Identical flags (including seed and parallelism) produce byte-identical
// artifacts; every number is rendered at 17 significant digits.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxlip/io.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/verification.hpp"

using namespace maxlip;

namespace {

struct CommonOpts {
  int dim = 1;
  int n = 16;
  int nx = 0, ny = 0;
  double h = 1.0;
  std::string family = "all";
  int samples = 64;
  std::uint64_t seed = 0;
  int parallel = 0;  // 0 = take the environment default
  long max_cubes = 0;
  std::string out;
  std::string format = "json";
};

void add_grid_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--dim", o.dim, "grid dimension (1 or 2)")->check(CLI::Range(1, 2));
  cmd->add_option("--n", o.n, "points per axis (1D length; 2D default for both axes)");
  cmd->add_option("--nx", o.nx, "2D: points along the first axis");
  cmd->add_option("--ny", o.ny, "2D: points along the second axis");
  cmd->add_option("--spacing", o.h, "lattice spacing h");
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--family", o.family, "cube family: all, dyadic or sampled")
      ->check(CLI::IsMember({"all", "dyadic", "sampled"}));
  cmd->add_option("--samples", o.samples, "cube count for the sampled family");
  cmd->add_option("--seed", o.seed, "seed for corpora and sampled families");
  cmd->add_option("--parallel", o.parallel,
                  "parallelism degree recorded in artifacts (default from MAXLIP_PARALLEL); "
                  "results never depend on it");
  cmd->add_option("--max-cubes", o.max_cubes,
                  "cube budget; an all family over more cubes degrades to sampled");
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--format", o.format, "artifact format")
      ->check(CLI::IsMember({"json", "csv"}));
}

int parallelism(const CommonOpts& o) {
  if (o.parallel > 0) return o.parallel;
  if (const char* env = std::getenv("MAXLIP_PARALLEL")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

Grid make_grid(const CommonOpts& o) {
  if (o.dim == 1) {
    if (o.n < 2) throw std::invalid_argument("need --n >= 2");
    return Grid::line(o.n, o.h);
  }
  int nx = o.nx > 0 ? o.nx : o.n;
  int ny = o.ny > 0 ? o.ny : o.n;
  if (nx < 2 || ny < 2) throw std::invalid_argument("need --nx/--ny >= 2");
  return Grid::plane(nx, ny, o.h);
}

// resolves the family, honoring the cube budget
CubeFamily make_family(const CommonOpts& o, const Grid& g, std::string& label) {
  if (o.family == "dyadic") {
    label = "dyadic";
    return CubeFamily::dyadic();
  }
  if (o.family == "sampled") {
    label = "sampled:" + std::to_string(o.samples);
    return CubeFamily::sampled(o.samples, o.seed);
  }
  long total = count_cubes(g, CubeFamily::all());
  if (o.max_cubes > 0 && total > o.max_cubes) {
    std::cerr << "warning: " << total << " cubes exceed the budget of " << o.max_cubes
              << "; degrading family all -> sampled:" << o.max_cubes << "\n";
    label = "sampled:" + std::to_string(o.max_cubes);
    return CubeFamily::sampled(o.max_cubes, o.seed);
  }
  label = "all";
  return CubeFamily::all();
}

// input problems (including unreadable files) are usage errors, exit 2
GridFunction load_function(const std::string& path, const CommonOpts& o) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return function_from_json(ordered_json::parse(text));
  return function_from_csv(text, make_grid(o));
}

ordered_json envelope(const std::string& command, const CommonOpts& o, const Grid* g,
                      const std::string& family_label) {
  ordered_json j;
  j["command"] = command;
  j["seed"] = o.seed;
  j["parallelism"] = parallelism(o);
  if (g != nullptr) {
    j["grid"] = ordered_json{{"dim", g->dim},
                             {"shape", g->dim == 1
                                           ? ordered_json::array({g->shape[0]})
                                           : ordered_json::array({g->shape[0], g->shape[1]})},
                             {"spacing", fmt17(g->h)}};
  }
  if (!family_label.empty()) j["family"] = family_label;
  return j;
}

void emit(const CommonOpts& o, const std::string& content) {
  if (o.out.empty())
    std::cout << content;
  else
    write_text_file(o.out, content);
}

void emit_json(const CommonOpts& o, const ordered_json& j) { emit(o, j.dump(2) + "\n"); }

Cube parse_cube(const std::string& text, int dim) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(std::stoi(item));
  if (static_cast<int>(parts.size()) != dim + 1)
    throw std::invalid_argument("cube argument needs " + std::to_string(dim + 1) +
                                " comma-separated integers (anchor..., side)");
  return dim == 1 ? Cube{{parts[0], 0}, parts[1]} : Cube{{parts[0], parts[1]}, parts[2]};
}

// ---- subcommand payloads ----

struct ComputeOpts {
  CommonOpts common;
  std::string op;
  std::string input, symbol, weight;
  std::string q0_arg;
  double beta = 0.25, r = 1.25;
  bool argmax = false;
};

int run_compute(const ComputeOpts& co) {
  GridFunction f = load_function(co.input, co.common);
  const Grid& g = f.grid();
  std::string family_label;
  CubeFamily family = make_family(co.common, g, family_label);

  auto need_symbol = [&]() {
    if (co.symbol.empty()) throw std::invalid_argument("--op " + co.op + " needs --symbol");
    GridFunction b = load_function(co.symbol, co.common);
    if (!(b.grid() == g)) throw std::invalid_argument("symbol grid differs from input grid");
    return b;
  };
  auto make_weight = [&]() {
    if (co.weight.empty()) return Weight(GridFunction::constant(g, 1.0));
    GridFunction w = load_function(co.weight, co.common);
    if (!(w.grid() == g)) throw std::invalid_argument("weight grid differs from input grid");
    return Weight(std::move(w));
  };

  OperatorOutput out = [&]() -> OperatorOutput {
    if (co.op == "M") return hl_maximal(f, family, co.argmax);
    if (co.op == "MQ0") {
      if (co.q0_arg.empty()) throw std::invalid_argument("--op MQ0 needs --q0");
      return restricted_maximal(f, parse_cube(co.q0_arg, g.dim), family, co.argmax);
    }
    if (co.op == "sharp") return sharp_maximal(f, family, co.argmax);
    if (co.op == "Mb") return maximal_commutator(need_symbol(), f, family, co.argmax);
    if (co.op == "commM") return {commutator_maximal(need_symbol(), f, family), {}, {}};
    if (co.op == "commSharp") return {commutator_sharp(need_symbol(), f, family), {}, {}};
    if (co.op == "Mfrac")
      return weighted_fractional_maximal(f, make_weight(), co.beta, co.r, family, co.argmax);
    throw std::invalid_argument("unknown operator " + co.op);
  }();

  if (co.common.format == "csv") {
    emit(co.common, function_to_csv(out.values));
    return 0;
  }
  ordered_json j = envelope("compute", co.common, &g, family_label);
  j["op"] = co.op;
  j["values"] = function_to_json(out.values)["values"];
  if (!out.everywhere_defined()) {
    ordered_json mask = ordered_json::array();
    for (std::uint8_t d : out.defined) mask.push_back(static_cast<int>(d));
    j["defined"] = std::move(mask);
  }
  if (out.has_argmax()) {
    ordered_json cubes = ordered_json::array();
    for (const Cube& q : out.argmax) cubes.push_back(cube_to_json(q, g.dim));
    j["argmax"] = std::move(cubes);
  }
  emit_json(co.common, j);
  return 0;
}

struct NormsOpts {
  CommonOpts common;
  std::string op;
  double p = 2.0, beta = 0.25, r = 0.0;
  std::string symbol, weight;
};

int run_norms(const NormsOpts& no) {
  Grid g = make_grid(no.common);
  std::string family_label;
  CubeFamily family = make_family(no.common, g, family_label);
  Corpus corpus = build_corpus(no.common.seed, g);
  if (!no.symbol.empty()) {
    GridFunction b = load_function(no.symbol, no.common);
    if (!(b.grid() == g)) throw std::invalid_argument("symbol grid differs from --dim/--n grid");
    bool nonneg = true;
    for (long k = 0; k < b.size(); ++k) nonneg = nonneg && b[k] >= 0.0;
    corpus.symbols.clear();
    corpus.symbols.push_back({"b_input", std::move(b), nonneg});
  }
  Weight mu = no.weight.empty() ? Weight(GridFunction::constant(g, 1.0))
                                : Weight(load_function(no.weight, no.common));
  if (!(mu.grid() == g)) throw std::invalid_argument("weight grid differs from --dim/--n grid");

  OperatorTag tag;
  if (no.op == "Mb")
    tag = OperatorTag::maximal_commutator;
  else if (no.op == "commM")
    tag = OperatorTag::commutator_maximal;
  else if (no.op == "commSharp")
    tag = OperatorTag::commutator_sharp;
  else if (no.op == "Mfrac")
    tag = OperatorTag::fractional;
  else
    throw std::invalid_argument("unknown operator " + no.op);

  Exponents e = Exponents::make(no.p, no.beta, g.dim, no.r);
  NormEstimate est = estimate_operator_norm(tag, corpus, e, mu, family);
  ordered_json j = envelope("norms", no.common, &g, family_label);
  j["estimate"] = estimate_to_json(est);
  emit_json(no.common, j);
  return 0;
}

struct FunctionalsOpts {
  CommonOpts common;
  std::string kind;
  std::string input, weight;
  double beta = 0.25, p = 1.0, s = 1.0;
};

int run_functionals(const FunctionalsOpts& fo) {
  GridFunction b = load_function(fo.input, fo.common);
  const Grid& g = b.grid();
  std::string family_label;
  CubeFamily family = make_family(fo.common, g, family_label);
  Weight mu = fo.weight.empty() ? Weight(GridFunction::constant(g, 1.0))
                                : Weight(load_function(fo.weight, fo.common));
  if (!(mu.grid() == g)) throw std::invalid_argument("weight grid differs from input grid");

  if (fo.kind == "lip") {
    LipNormResult r = lip_norm(b, mu, fo.beta, fo.p, family);
    ordered_json j = envelope("functionals", fo.common, &g, family_label);
    j["kind"] = "lip";
    j["result"] = lip_result_to_json(r, g.dim);
    emit_json(fo.common, j);
    return 0;
  }
  FunctionalProfile prof;
  if (fo.kind == "maximal")
    prof = maximal_char_functional(b, mu, fo.beta, fo.s, family);
  else if (fo.kind == "sharp")
    prof = sharp_char_functional(b, mu, fo.beta, fo.s, family);
  else
    throw std::invalid_argument("unknown functional kind " + fo.kind);
  if (fo.common.format == "csv") {
    emit(fo.common, profile_to_csv(prof, g.dim));
    return 0;
  }
  ordered_json j = envelope("functionals", fo.common, &g, family_label);
  j["kind"] = fo.kind;
  j["profile"] = profile_to_json(prof, g.dim);
  emit_json(fo.common, j);
  return 0;
}

struct VerifyOpts {
  CommonOpts common;
  std::string suite = "all";
  double p = 2.0, beta = 0.25, r = 1.25;
  std::string worst;  // optional CSV of failures
};

int run_verify(const VerifyOpts& vo) {
  Grid g = make_grid(vo.common);
  std::string family_label;
  CubeFamily family = make_family(vo.common, g, family_label);
  Corpus corpus = build_corpus(vo.common.seed, g);
  Exponents e = Exponents::make(vo.p, vo.beta, g.dim, vo.r);

  std::vector<std::pair<std::string, VerificationReport>> reports;  // (weight label, report)
  auto want = [&](const std::string& name) { return vo.suite == "all" || vo.suite == name; };
  bool known = false;
  if (want("domination")) {
    known = true;
    reports.emplace_back("", verify_pointwise_domination(corpus, family));
  }
  if (want("restriction")) {
    known = true;
    reports.emplace_back("", verify_restriction_identities(corpus, family));
  }
  if (want("mean_split")) {
    known = true;
    reports.emplace_back("", verify_mean_split(corpus, family));
  }
  if (want("converse")) {
    known = true;
    for (const auto& cw : corpus.weights)
      reports.emplace_back(cw.name, verify_converse_chain(corpus, family, e, cw.weight));
  }
  if (want("holder")) {
    known = true;
    reports.emplace_back("",
                         verify_holder_monotonicity(corpus, family, e.beta, {1.0, 1.5, 2.0, 3.0, 4.0}));
  }
  if (want("commutator")) {
    known = true;
    for (const auto& cw : corpus.weights)
      reports.emplace_back(cw.name, verify_commutator_identity(corpus, family, e, cw.weight));
  }
  if (want("ratios")) {
    known = true;
    reports.emplace_back("", verify_averaged_ratio_bounds(corpus, family, e.beta, e.r));
  }
  if (want("fractional")) {
    known = true;
    reports.emplace_back("", verify_fractional_domination(corpus, family, e.beta, e.r));
  }
  if (!known) throw std::invalid_argument("unknown suite " + vo.suite);

  bool all_passed = true;
  ordered_json arr = ordered_json::array();
  std::ostringstream worst_csv;
  for (const auto& [wname, rep] : reports) {
    all_passed = all_passed && rep.passed();
    ordered_json jr = report_to_json(rep, g.dim);
    if (!wname.empty()) jr["weight"] = wname;
    arr.push_back(std::move(jr));
    if (!vo.worst.empty()) worst_csv << report_to_csv(rep, g.dim);
  }
  ordered_json j = envelope("verify", vo.common, &g, family_label);
  j["exponents"] = exponents_to_json(e);
  j["passed"] = all_passed;
  j["reports"] = std::move(arr);
  emit_json(vo.common, j);
  if (!vo.worst.empty()) write_text_file(vo.worst, worst_csv.str());
  return all_passed ? 0 : 1;
}

struct ExperimentOpts {
  CommonOpts common;
  std::string kind;
  double p = 1.5, beta = 0.5, r = 1.25;
  std::vector<int> levels{17, 33, 65, 129};
  int coarse = 64, fine = 128;
};

int run_experiment(const ExperimentOpts& eo) {
  Exponents e = Exponents::make(eo.p, eo.beta, 1, eo.r);
  ordered_json j = envelope("experiment", eo.common, nullptr, "");
  if (eo.kind == "refinement") {
    j["kind"] = "refinement";
    j["refinement"] = refinement_to_json(refinement_experiment(e, eo.levels));
  } else if (eo.kind == "stability") {
    j["kind"] = "stability";
    j["stability"] = stability_to_json(stability_experiment(e, eo.coarse, eo.fine));
  } else {
    throw std::invalid_argument("unknown experiment kind " + eo.kind);
  }
  emit_json(eo.common, j);
  return 0;
}

int run_corpus(const CommonOpts& o) {
  Grid g = make_grid(o);
  Corpus corpus = build_corpus(o.seed, g);
  ordered_json j = envelope("corpus", o, &g, "");
  j["corpus"] = corpus_summary_json(corpus);
  emit_json(o, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete maximal operators, commutators and weighted Lipschitz norms"};
  app.require_subcommand(1);

  ComputeOpts co;
  CLI::App* compute = app.add_subcommand("compute", "apply one operator to a grid function");
  add_grid_flags(compute, co.common);
  add_common_flags(compute, co.common);
  compute->add_option("--op", co.op, "M, MQ0, sharp, Mb, commM, commSharp or Mfrac")->required();
  compute->add_option("--input", co.input, "input grid function (csv or json)")->required();
  compute->add_option("--symbol", co.symbol, "symbol b for the commutator operators");
  compute->add_option("--weight", co.weight, "weight for Mfrac (unit when omitted)");
  compute->add_option("--q0", co.q0_arg, "restriction cube 'anchor,side' or 'a0,a1,side'");
  compute->add_option("--beta", co.beta, "fractional order");
  compute->add_option("--r", co.r, "fractional averaging exponent");
  compute->add_flag("--argmax", co.argmax, "record per-point maximizing cubes");

  NormsOpts no;
  CLI::App* norms = app.add_subcommand("norms", "empirical operator-norm estimate over a corpus");
  add_grid_flags(norms, no.common);
  add_common_flags(norms, no.common);
  norms->add_option("--op", no.op, "Mb, commM, commSharp or Mfrac")->required();
  norms->add_option("--p", no.p, "input exponent p");
  norms->add_option("--beta", no.beta, "Lipschitz order");
  norms->add_option("--r", no.r, "fractional averaging exponent (Mfrac)");
  norms->add_option("--symbol", no.symbol, "replace the corpus symbols by this one");
  norms->add_option("--weight", no.weight, "weight function (unit when omitted)");

  FunctionalsOpts fo;
  CLI::App* functionals =
      app.add_subcommand("functionals", "Lipschitz norm or characterizing functional of a symbol");
  add_grid_flags(functionals, fo.common);
  add_common_flags(functionals, fo.common);
  functionals->add_option("--kind", fo.kind, "lip, maximal or sharp")->required();
  functionals->add_option("--input", fo.input, "symbol b (csv or json)")->required();
  functionals->add_option("--weight", fo.weight, "weight function (unit when omitted)");
  functionals->add_option("--beta", fo.beta, "Lipschitz order");
  functionals->add_option("--p", fo.p, "norm exponent (lip)");
  functionals->add_option("--s", fo.s, "functional exponent (maximal/sharp)");

  VerifyOpts vo;
  CLI::App* verify = app.add_subcommand("verify", "run verification suites on a seeded corpus");
  add_grid_flags(verify, vo.common);
  add_common_flags(verify, vo.common);
  verify->add_option("--suite", vo.suite,
                     "domination, restriction, mean_split, converse, holder, commutator, "
                     "ratios, fractional or all");
  verify->add_option("--p", vo.p, "input exponent p");
  verify->add_option("--beta", vo.beta, "Lipschitz order");
  verify->add_option("--r", vo.r, "fractional averaging exponent");
  verify->add_option("--worst", vo.worst, "also write a CSV of failing checks here");

  ExperimentOpts eo;
  CLI::App* experiment = app.add_subcommand("experiment", "refinement / stability experiments");
  add_common_flags(experiment, eo.common);
  experiment->add_option("--kind", eo.kind, "refinement or stability")->required();
  experiment->add_option("--p", eo.p, "input exponent p");
  experiment->add_option("--beta", eo.beta, "Lipschitz order");
  experiment->add_option("--r", eo.r, "fractional averaging exponent");
  experiment->add_option("--levels", eo.levels, "refinement lattice sizes")->delimiter(',');
  experiment->add_option("--coarse", eo.coarse, "stability coarse lattice size");
  experiment->add_option("--fine", eo.fine, "stability fine lattice size");

  CommonOpts cs;
  CLI::App* corpus = app.add_subcommand("corpus", "summarize the seeded corpus on a grid");
  add_grid_flags(corpus, cs);
  add_common_flags(corpus, cs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compute) return run_compute(co);
    if (*norms) return run_norms(no);
    if (*functionals) return run_functionals(fo);
    if (*verify) return run_verify(vo);
    if (*experiment) return run_experiment(eo);
    if (*corpus) return run_corpus(cs);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
