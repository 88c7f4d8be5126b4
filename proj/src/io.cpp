#include "maxlip/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maxlip {

namespace {

double parse_double(const std::string& s) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  size_t k = 0;
  while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
  return s.substr(k);
}

ordered_json values_as_strings(const std::vector<double>& vals) {
  ordered_json arr = ordered_json::array();
  for (double v : vals) arr.push_back(fmt17(v));
  return arr;
}

}  // namespace

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string function_to_csv(const GridFunction& f) {
  const Grid& g = f.grid();
  std::ostringstream os;
  for (int i = 0; i < g.shape[0]; ++i) {
    for (int j = 0; j < g.shape[1]; ++j) {
      if (j > 0) os << ',';
      os << fmt17(f.at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

GridFunction function_from_csv(const std::string& text, const Grid& g) {
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(g.point_count()));
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trimmed(line);
    if (line.empty()) continue;
    for (const std::string& cell : split(line, ',')) vals.push_back(parse_double(trimmed(cell)));
  }
  if (static_cast<long>(vals.size()) != g.point_count())
    throw std::invalid_argument("csv holds " + std::to_string(vals.size()) +
                                " values, the grid needs " + std::to_string(g.point_count()));
  return GridFunction(g, std::move(vals));
}

ordered_json function_to_json(const GridFunction& f) {
  const Grid& g = f.grid();
  ordered_json j;
  j["dim"] = g.dim;
  j["shape"] = g.dim == 1 ? ordered_json::array({g.shape[0]})
                          : ordered_json::array({g.shape[0], g.shape[1]});
  j["spacing"] = fmt17(g.h);
  j["values"] = values_as_strings(f.values());
  return j;
}

GridFunction function_from_json(const ordered_json& j) {
  int dim = j.at("dim").get<int>();
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  const auto& shape = j.at("shape");
  if (static_cast<int>(shape.size()) != dim)
    throw std::invalid_argument("shape length does not match dim");
  double h = parse_double(j.at("spacing").get<std::string>());
  Grid g = dim == 1 ? Grid::line(shape[0].get<int>(), h)
                    : Grid::plane(shape[0].get<int>(), shape[1].get<int>(), h);
  std::vector<double> vals;
  vals.reserve(j.at("values").size());
  for (const auto& v : j.at("values")) vals.push_back(parse_double(v.get<std::string>()));
  if (static_cast<long>(vals.size()) != g.point_count())
    throw std::invalid_argument("values length does not match the grid");
  return GridFunction(g, std::move(vals));
}

ordered_json cube_to_json(const Cube& q, int dim) {
  ordered_json j;
  j["anchor"] = dim == 1 ? ordered_json::array({q.anchor[0]})
                         : ordered_json::array({q.anchor[0], q.anchor[1]});
  j["side"] = q.side;
  return j;
}

ordered_json exponents_to_json(const Exponents& e) {
  ordered_json j;
  j["p"] = fmt17(e.p);
  j["beta"] = fmt17(e.beta);
  j["q"] = fmt17(e.q);
  j["n"] = e.n;
  if (e.r > 0.0) j["r"] = fmt17(e.r);
  if (e.s > 0.0) j["s"] = fmt17(e.s);
  return j;
}

ordered_json profile_to_json(const FunctionalProfile& p, int dim) {
  ordered_json j;
  j["tag"] = p.tag;
  j["beta"] = fmt17(p.beta);
  j["s"] = fmt17(p.s);
  j["sup"] = fmt17(p.sup);
  j["witness"] = cube_to_json(p.witness, dim);
  ordered_json entries = ordered_json::array();
  for (const auto& en : p.entries) {
    ordered_json e = cube_to_json(en.cube, dim);
    e["value"] = fmt17(en.value);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string profile_to_csv(const FunctionalProfile& p, int dim) {
  std::ostringstream os;
  os << (dim == 1 ? "anchor,side,value\n" : "anchor0,anchor1,side,value\n");
  for (const auto& en : p.entries) {
    os << en.cube.anchor[0] << ',';
    if (dim == 2) os << en.cube.anchor[1] << ',';
    os << en.cube.side << ',' << fmt17(en.value) << '\n';
  }
  return os.str();
}

ordered_json estimate_to_json(const NormEstimate& e) {
  ordered_json j;
  j["operator"] = tag_name(e.op);
  j["exponents"] = exponents_to_json(e.exponents);
  j["sup_ratio"] = fmt17(e.sup_ratio);
  j["witness"] = e.witness;
  j["n_samples"] = e.n_samples;
  j["n_skipped"] = e.n_skipped;
  return j;
}

ordered_json lip_result_to_json(const LipNormResult& r, int dim) {
  ordered_json j;
  j["value"] = fmt17(r.value);
  j["witness"] = cube_to_json(r.witness, dim);
  j["beta"] = fmt17(r.beta);
  j["p"] = fmt17(r.p);
  return j;
}

ordered_json report_to_json(const VerificationReport& rep, int dim) {
  ordered_json j;
  j["suite"] = rep.suite;
  j["passed"] = rep.passed();
  j["cases"] = rep.cases;
  j["worst_slack"] = fmt17(rep.worst_slack);
  ordered_json fails = ordered_json::array();
  for (const auto& f : rep.failures) {
    ordered_json e;
    e["context"] = f.context;
    if (f.cube.side > 0) e["cube"] = cube_to_json(f.cube, dim);
    if (f.point >= 0) e["point"] = f.point;
    e["lhs"] = fmt17(f.lhs);
    e["rhs"] = fmt17(f.rhs);
    fails.push_back(std::move(e));
  }
  j["failures"] = std::move(fails);
  j["notes"] = rep.notes;
  ordered_json metrics;
  for (const auto& [k, v] : rep.metrics) metrics[k] = fmt17(v);
  j["metrics"] = std::move(metrics);
  return j;
}

std::string report_to_csv(const VerificationReport& rep, int dim) {
  std::ostringstream os;
  os << (dim == 1 ? "context,anchor,side,point,lhs,rhs\n"
                  : "context,anchor0,anchor1,side,point,lhs,rhs\n");
  for (const auto& f : rep.failures) {
    std::string ctx = f.context;
    for (char& ch : ctx)
      if (ch == ',') ch = ';';
    os << ctx << ',' << f.cube.anchor[0] << ',';
    if (dim == 2) os << f.cube.anchor[1] << ',';
    os << f.cube.side << ',' << f.point << ',' << fmt17(f.lhs) << ',' << fmt17(f.rhs) << '\n';
  }
  return os.str();
}

ordered_json refinement_to_json(const RefinementExperiment& ex) {
  ordered_json j;
  j["exponents"] = exponents_to_json(ex.exponents);
  j["levels"] = ex.levels;
  ordered_json tables = ordered_json::array();
  for (const auto& t : ex.tables) {
    ordered_json jt;
    jt["profile"] = t.profile;
    jt["beta"] = fmt17(t.beta);
    jt["limit_value"] = fmt17(t.limit_value);
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
      ordered_json jr;
      jr["n"] = r.n;
      jr["h"] = fmt17(r.h);
      jr["q_measure"] = fmt17(r.q_measure);
      jr["lhs_neg"] = fmt17(r.lhs_neg);
      jr["rhs_neg"] = fmt17(r.rhs_neg);
      jr["lhs_mix"] = fmt17(r.lhs_mix);
      jr["rhs_mix"] = fmt17(r.rhs_mix);
      rows.push_back(std::move(jr));
    }
    jt["rows"] = std::move(rows);
    jt["rhs_neg_slope"] = fmt17(t.rhs_neg_slope);
    jt["expected_slope"] = fmt17(t.expected_slope);
    jt["rhs_neg_decreasing"] = t.rhs_neg_decreasing;
    tables.push_back(std::move(jt));
  }
  j["tables"] = std::move(tables);
  return j;
}

ordered_json stability_to_json(const StabilityResult& res) {
  auto metric_map = [](const std::map<std::string, double>& m) {
    ordered_json j;
    for (const auto& [k, v] : m) j[k] = fmt17(v);
    return j;
  };
  ordered_json j;
  j["exponents"] = exponents_to_json(res.exponents);
  j["n_coarse"] = res.n_coarse;
  j["n_fine"] = res.n_fine;
  j["coarse"] = metric_map(res.coarse);
  j["fine"] = metric_map(res.fine);
  j["ratio"] = metric_map(res.ratio);
  return j;
}

ordered_json corpus_summary_json(const Corpus& c) {
  auto span = [](const GridFunction& f) {
    double lo = f[0], hi = f[0];
    for (long k = 1; k < f.size(); ++k) {
      lo = std::min(lo, f[k]);
      hi = std::max(hi, f[k]);
    }
    ordered_json j;
    j["min"] = fmt17(lo);
    j["max"] = fmt17(hi);
    return j;
  };
  ordered_json j;
  j["seed"] = c.seed;
  j["grid"] = ordered_json{{"dim", c.grid.dim},
                           {"shape", c.grid.dim == 1
                                         ? ordered_json::array({c.grid.shape[0]})
                                         : ordered_json::array({c.grid.shape[0], c.grid.shape[1]})},
                           {"spacing", fmt17(c.grid.h)}};
  ordered_json fs = ordered_json::array();
  for (const auto& f : c.functions) {
    ordered_json e;
    e["name"] = f.name;
    e["nonnegative"] = f.nonnegative;
    e["range"] = span(f.values);
    fs.push_back(std::move(e));
  }
  j["functions"] = std::move(fs);
  ordered_json bs = ordered_json::array();
  for (const auto& b : c.symbols) {
    ordered_json e;
    e["name"] = b.name;
    e["nonnegative"] = b.nonnegative;
    e["range"] = span(b.values);
    bs.push_back(std::move(e));
  }
  j["symbols"] = std::move(bs);
  ordered_json ws = ordered_json::array();
  for (const auto& w : c.weights) {
    ordered_json e;
    e["name"] = w.name;
    e["a1"] = fmt17(w.a1);
    e["range"] = span(w.weight.values());
    ws.push_back(std::move(e));
  }
  j["weights"] = std::move(ws);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace maxlip
