#pragma once

#include <map>
#include <string>

#include "evdom/checkers.hpp"
#include "evdom/scenarios.hpp"
#include "evdom/spectral.hpp"

namespace evdom {

/// Fully resolved run configuration echoed into every output.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string output_format = "json";  // "json" or "csv"
  std::string output_path;             // empty = stdout
  std::uint64_t seed = 42;
  double eps = 1e-10;
};

/// 17 significant digits, lowercase scientific: the pinned float wire format.
std::string format_sci(double x);
double parse_sci(const std::string& s);

// JSON documents carry {config, verdicts, samples, witnesses, provenance}.
// CSV carries '# key=value' config comments, a header line, and one row per
// sample (param, margin, pass). Both encodings are byte-deterministic and
// round-trip their sample tables exactly.

std::string domination_report_to_json(const DominationReport& r, const RunConfig* cfg = nullptr);
std::string domination_report_to_csv(const DominationReport& r, const RunConfig* cfg = nullptr);
DominationReport domination_report_from_json(const std::string& text);

std::string window_report_to_json(const WindowReport& r, const RunConfig* cfg = nullptr);
std::string window_report_to_csv(const WindowReport& r, const RunConfig* cfg = nullptr);
WindowReport window_report_from_json(const std::string& text);

/// Parses the sample rows of a CSV report: (param, margin, pass).
struct CsvSample {
  double param = 0.0;
  double margin = 0.0;
  bool pass = false;
};
std::vector<CsvSample> samples_from_csv(const std::string& text);

std::string scenario_result_to_json(const ScenarioResult& r, const RunConfig* cfg = nullptr);
std::string equivalence_audit_to_json(const EquivalenceAudit& a, const RunConfig* cfg = nullptr);
std::string spectral_data_to_json(const SpectralData& s, const RunConfig* cfg = nullptr);
std::string spectral_data_to_csv(const SpectralData& s, const RunConfig* cfg = nullptr);

bool operator==(const MarginSample& a, const MarginSample& b);
bool operator==(const Witness& a, const Witness& b);
bool operator==(const DominationReport& a, const DominationReport& b);
bool operator==(const WindowSample& a, const WindowSample& b);
bool operator==(const WindowReport& a, const WindowReport& b);

}  // namespace evdom
