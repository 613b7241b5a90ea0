#include "evdom/reporting.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "evdom/errors.hpp"

namespace evdom {

namespace {

using nlohmann::json;

json config_to_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["parameters"] = json::object();
  for (const auto& [k, v] : cfg.parameters) j["parameters"][k] = v;
  j["output_format"] = cfg.output_format;
  j["output_path"] = cfg.output_path;
  j["seed"] = cfg.seed;
  j["eps"] = cfg.eps;
  return j;
}

json finite_or_null(double x) {
  if (std::isfinite(x)) return json(x);
  return json();  // null for NaN / inf (JSON has no encoding for them)
}

double null_or_double(const json& j, double fallback) {
  return j.is_null() ? fallback : j.get<double>();
}

DominationVerdict domination_verdict_from_string(const std::string& s) {
  if (s == "domination_for_all_sampled_t") return DominationVerdict::domination_for_all_sampled_t;
  if (s == "eventual_domination_observed") return DominationVerdict::eventual_domination_observed;
  if (s == "no_domination_in_window") return DominationVerdict::no_domination_in_window;
  throw PreconditionError("unknown domination verdict: " + s);
}

WindowVerdict window_verdict_from_string(const std::string& s) {
  if (s == "all_sampled_pass") return WindowVerdict::all_sampled_pass;
  if (s == "window_observed") return WindowVerdict::window_observed;
  if (s == "no_window_observed") return WindowVerdict::no_window_observed;
  throw PreconditionError("unknown window verdict: " + s);
}

Side side_from_string(const std::string& s) {
  if (s == "right") return Side::right;
  if (s == "left") return Side::left;
  throw PreconditionError("unknown side: " + s);
}

json witness_to_json(const Witness& w) {
  json j;
  j["param"] = w.param;
  j["index"] = w.index;
  j["row"] = w.row;
  j["col"] = w.col;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  return j;
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.param = j.at("param").get<double>();
  w.index = j.at("index").get<int>();
  w.row = j.at("row").get<int>();
  w.col = j.at("col").get<int>();
  w.lhs = j.at("lhs").get<double>();
  w.rhs = j.at("rhs").get<double>();
  return w;
}

void append_config_comments(std::ostringstream& out, const RunConfig* cfg) {
  if (!cfg) return;
  out << "# command=" << cfg->command << "\n";
  for (const auto& [k, v] : cfg->parameters) out << "# " << k << "=" << v << "\n";
  out << "# seed=" << cfg->seed << "\n";
  out << "# eps=" << format_sci(cfg->eps) << "\n";
}

}  // namespace

std::string format_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

double parse_sci(const std::string& s) {
  size_t used = 0;
  const double x = std::stod(s, &used);
  if (used == 0) throw PreconditionError("parse_sci: cannot parse '" + s + "'");
  return x;
}

std::string domination_report_to_json(const DominationReport& r, const RunConfig* cfg) {
  json j;
  if (cfg) j["config"] = config_to_json(*cfg);
  j["mode"] = r.mode;
  j["pair"] = r.pair;
  j["u"] = json::array();
  for (int i = 0; i < r.u.size(); ++i) j["u"].push_back(r.u[i]);
  j["rescaled_by"] = r.rescaled_by;
  j["eps"] = r.eps;
  j["samples"] = json::array();
  for (const auto& s : r.samples) {
    json js;
    js["param"] = s.param;
    js["margin"] = s.margin;
    js["margin_raw"] = s.margin_raw;
    js["rank_one_c"] = finite_or_null(s.rank_one_c);
    js["pass"] = s.pass;
    j["samples"].push_back(js);
  }
  j["verdicts"]["verdict"] = to_string(r.verdict);
  j["verdicts"]["earliest_pass"] =
      r.earliest_pass ? json(*r.earliest_pass) : json();
  j["witnesses"] = json::array();
  if (r.witness) j["witnesses"].push_back(witness_to_json(*r.witness));
  j["provenance"]["check"] = r.mode;
  j["provenance"]["tolerance"] = r.eps;
  return j.dump(2);
}

DominationReport domination_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  DominationReport r;
  r.mode = j.at("mode").get<std::string>();
  r.pair = j.at("pair").get<std::string>();
  const auto& ju = j.at("u");
  r.u.resize(static_cast<int>(ju.size()));
  for (int i = 0; i < r.u.size(); ++i) r.u[i] = ju.at(i).get<double>();
  r.rescaled_by = j.at("rescaled_by").get<double>();
  r.eps = j.at("eps").get<double>();
  for (const auto& js : j.at("samples")) {
    MarginSample s;
    s.param = js.at("param").get<double>();
    s.margin = js.at("margin").get<double>();
    s.margin_raw = js.at("margin_raw").get<double>();
    s.rank_one_c = null_or_double(js.at("rank_one_c"), std::nan(""));
    s.pass = js.at("pass").get<bool>();
    r.samples.push_back(s);
  }
  r.verdict = domination_verdict_from_string(j.at("verdicts").at("verdict").get<std::string>());
  const auto& ep = j.at("verdicts").at("earliest_pass");
  if (!ep.is_null()) r.earliest_pass = ep.get<double>();
  const auto& jw = j.at("witnesses");
  if (!jw.empty()) r.witness = witness_from_json(jw.at(0));
  return r;
}

std::string domination_report_to_csv(const DominationReport& r, const RunConfig* cfg) {
  std::ostringstream out;
  append_config_comments(out, cfg);
  out << "# mode=" << r.mode << "\n";
  out << "# pair=" << r.pair << "\n";
  out << "# rescaled_by=" << format_sci(r.rescaled_by) << "\n";
  out << "# verdict=" << to_string(r.verdict) << "\n";
  if (r.earliest_pass) out << "# earliest_pass=" << format_sci(*r.earliest_pass) << "\n";
  out << "param,margin,pass\n";
  for (const auto& s : r.samples)
    out << format_sci(s.param) << "," << format_sci(s.margin) << "," << (s.pass ? 1 : 0) << "\n";
  return out.str();
}

std::string window_report_to_json(const WindowReport& r, const RunConfig* cfg) {
  json j;
  if (cfg) j["config"] = config_to_json(*cfg);
  j["mode"] = r.mode;
  j["pair"] = r.pair;
  j["lambda0"] = r.lambda0;
  j["side"] = to_string(r.side);
  j["eps"] = r.eps;
  j["samples"] = json::array();
  for (const auto& s : r.samples) {
    json js;
    js["lambda"] = s.lambda;
    js["offset"] = s.offset;
    js["margin"] = s.margin;
    js["pass"] = s.pass;
    js["skipped"] = s.skipped;
    j["samples"].push_back(js);
  }
  j["verdicts"]["verdict"] = to_string(r.verdict);
  j["verdicts"]["delta_found"] = r.delta_found;
  j["witnesses"] = json::array();
  j["provenance"]["check"] = r.mode;
  j["provenance"]["tolerance"] = r.eps;
  return j.dump(2);
}

WindowReport window_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  WindowReport r;
  r.mode = j.at("mode").get<std::string>();
  r.pair = j.at("pair").get<std::string>();
  r.lambda0 = j.at("lambda0").get<double>();
  r.side = side_from_string(j.at("side").get<std::string>());
  r.eps = j.at("eps").get<double>();
  for (const auto& js : j.at("samples")) {
    WindowSample s;
    s.lambda = js.at("lambda").get<double>();
    s.offset = js.at("offset").get<double>();
    s.margin = js.at("margin").get<double>();
    s.pass = js.at("pass").get<bool>();
    s.skipped = js.at("skipped").get<bool>();
    r.samples.push_back(s);
  }
  r.verdict = window_verdict_from_string(j.at("verdicts").at("verdict").get<std::string>());
  r.delta_found = j.at("verdicts").at("delta_found").get<double>();
  return r;
}

std::string window_report_to_csv(const WindowReport& r, const RunConfig* cfg) {
  std::ostringstream out;
  append_config_comments(out, cfg);
  out << "# mode=" << r.mode << "\n";
  out << "# pair=" << r.pair << "\n";
  out << "# lambda0=" << format_sci(r.lambda0) << "\n";
  out << "# side=" << to_string(r.side) << "\n";
  out << "# delta_found=" << format_sci(r.delta_found) << "\n";
  out << "# verdict=" << to_string(r.verdict) << "\n";
  int skipped = 0;
  for (const auto& s : r.samples)
    if (s.skipped) ++skipped;
  out << "# skipped=" << skipped << "\n";
  out << "param,margin,pass\n";
  for (const auto& s : r.samples) {
    if (s.skipped) continue;
    out << format_sci(s.lambda) << "," << format_sci(s.margin) << "," << (s.pass ? 1 : 0)
        << "\n";
  }
  return out.str();
}

std::vector<CsvSample> samples_from_csv(const std::string& text) {
  std::vector<CsvSample> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("param,", 0) != 0)
        throw PreconditionError("samples_from_csv: missing 'param,margin,pass' header");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw PreconditionError("samples_from_csv: malformed row '" + line + "'");
    CsvSample s;
    s.param = parse_sci(a);
    s.margin = parse_sci(b);
    s.pass = c == "1";
    rows.push_back(s);
  }
  if (!header_seen) throw PreconditionError("samples_from_csv: no header found");
  return rows;
}

std::string scenario_result_to_json(const ScenarioResult& r, const RunConfig* cfg) {
  json j;
  if (cfg) j["config"] = config_to_json(*cfg);
  j["name"] = r.name;
  j["scenario_config"] =
      r.config_json.empty() ? json::object() : json::parse(r.config_json);
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["summary"] = c.summary;
    if (c.details_json.empty()) {
      jc["details"] = json();
    } else {
      jc["details"] = json::parse(c.details_json);
    }
    j["checks"].push_back(jc);
  }
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  j["provenance"]["check"] = "scenario:" + r.name;
  return j.dump(2);
}

std::string equivalence_audit_to_json(const EquivalenceAudit& a, const RunConfig* cfg) {
  json j;
  if (cfg) j["config"] = config_to_json(*cfg);
  j["op"] = a.op_name;
  j["criteria"] = {"cesaro_positivity", "ergodic_projection", "max_principle",
                   "anti_max_principle"};
  j["per_trial"] = json::array();
  for (const auto& row : a.per_trial) j["per_trial"].push_back({row[0], row[1], row[2], row[3]});
  j["aggregate"] = {a.aggregate[0], a.aggregate[1], a.aggregate[2], a.aggregate[3]};
  j["agree"] = a.agree;
  j["trials_agreeing"] = a.trials_agreeing;
  j["provenance"]["check"] = "equivalence_audit";
  return j.dump(2);
}

std::string spectral_data_to_json(const SpectralData& s, const RunConfig* cfg) {
  json j;
  if (cfg) j["config"] = config_to_json(*cfg);
  j["eigenvalues"] = json::array();
  for (int i = 0; i < s.eigenvalues.size(); ++i) {
    json je;
    je["re"] = s.eigenvalues[i].real();
    je["im"] = s.eigenvalues[i].imag();
    j["eigenvalues"].push_back(je);
  }
  j["spectral_bound"] = s.spectral_bound;
  j["dominant"] = s.dominant;
  j["gap"] = s.gap;
  j["provenance"]["check"] = "spectrum";
  return j.dump(2);
}

std::string spectral_data_to_csv(const SpectralData& s, const RunConfig* cfg) {
  std::ostringstream out;
  append_config_comments(out, cfg);
  out << "# spectral_bound=" << format_sci(s.spectral_bound) << "\n";
  out << "# dominant=" << (s.dominant ? 1 : 0) << "\n";
  out << "# gap=" << format_sci(s.gap) << "\n";
  out << "re,im\n";
  for (int i = 0; i < s.eigenvalues.size(); ++i)
    out << format_sci(s.eigenvalues[i].real()) << "," << format_sci(s.eigenvalues[i].imag())
        << "\n";
  return out.str();
}

namespace {
bool double_eq(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b;
}
}  // namespace

bool operator==(const MarginSample& a, const MarginSample& b) {
  return double_eq(a.param, b.param) && double_eq(a.margin, b.margin) &&
         double_eq(a.margin_raw, b.margin_raw) && double_eq(a.rank_one_c, b.rank_one_c) &&
         a.pass == b.pass;
}

bool operator==(const Witness& a, const Witness& b) {
  return double_eq(a.param, b.param) && a.index == b.index && a.row == b.row && a.col == b.col &&
         double_eq(a.lhs, b.lhs) && double_eq(a.rhs, b.rhs);
}

bool operator==(const DominationReport& a, const DominationReport& b) {
  if (a.mode != b.mode || a.pair != b.pair || a.samples != b.samples ||
      a.verdict != b.verdict || !double_eq(a.rescaled_by, b.rescaled_by) ||
      !double_eq(a.eps, b.eps))
    return false;
  if (a.earliest_pass.has_value() != b.earliest_pass.has_value()) return false;
  if (a.earliest_pass && !double_eq(*a.earliest_pass, *b.earliest_pass)) return false;
  if (a.witness.has_value() != b.witness.has_value()) return false;
  if (a.witness && !(*a.witness == *b.witness)) return false;
  if (a.u.size() != b.u.size()) return false;
  for (int i = 0; i < a.u.size(); ++i)
    if (!double_eq(a.u[i], b.u[i])) return false;
  return true;
}

bool operator==(const WindowSample& a, const WindowSample& b) {
  return double_eq(a.lambda, b.lambda) && double_eq(a.offset, b.offset) &&
         double_eq(a.margin, b.margin) && a.pass == b.pass && a.skipped == b.skipped;
}

bool operator==(const WindowReport& a, const WindowReport& b) {
  return a.mode == b.mode && a.pair == b.pair && double_eq(a.lambda0, b.lambda0) &&
         a.side == b.side && a.samples == b.samples && double_eq(a.delta_found, b.delta_found) &&
         a.verdict == b.verdict && double_eq(a.eps, b.eps);
}

}  // namespace evdom
