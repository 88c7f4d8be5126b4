#ifndef MAXLIP_IO_HPP
#define MAXLIP_IO_HPP

#include <string>

#include "json.hpp"
#include "maxlip/corpus.hpp"
#include "maxlip/grid.hpp"
#include "maxlip/lipschitz.hpp"
#include "maxlip/verification.hpp"

namespace maxlip {

using ordered_json = nlohmann::ordered_json;

// fixed decimal rendering (17 significant digits) used for every floating-point
// number that lands in an artifact; guarantees byte-identical reruns and exact
// double round-trip
std::string fmt17(double v);

// ---- grid functions ----

// CSV: one value per line in 1D, one comma-separated row per line in 2D
std::string function_to_csv(const GridFunction& f);
// the grid is external metadata for CSV; shape must match the parsed values
GridFunction function_from_csv(const std::string& text, const Grid& g);

// self-describing JSON envelope {dim, shape, spacing, values}
ordered_json function_to_json(const GridFunction& f);
GridFunction function_from_json(const ordered_json& j);

// ---- result types ----

ordered_json cube_to_json(const Cube& q, int dim);
ordered_json exponents_to_json(const Exponents& e);

// {tag, beta, s, sup, witness, entries}
ordered_json profile_to_json(const FunctionalProfile& p, int dim);
// header "anchor,side,value" (1D) or "anchor0,anchor1,side,value" (2D)
std::string profile_to_csv(const FunctionalProfile& p, int dim);

ordered_json estimate_to_json(const NormEstimate& e);
ordered_json lip_result_to_json(const LipNormResult& r, int dim);

ordered_json report_to_json(const VerificationReport& rep, int dim);
// per-failure table, header-only when the suite passed
std::string report_to_csv(const VerificationReport& rep, int dim);

ordered_json refinement_to_json(const RefinementExperiment& ex);
ordered_json stability_to_json(const StabilityResult& res);

// names, flags and A1 constants of the corpus members, plus per-member ranges
ordered_json corpus_summary_json(const Corpus& c);

// ---- files ----

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace maxlip

#endif  // MAXLIP_IO_HPP
