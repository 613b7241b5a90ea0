#include "evdom/matrix_market.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "evdom/errors.hpp"
#include "evdom/reporting.hpp"

namespace evdom {

namespace {

NodeScheme scheme_from_string(const std::string& s) {
  if (s == "endpoints_included") return NodeScheme::endpoints_included;
  if (s == "interior_only") return NodeScheme::interior_only;
  if (s == "periodic_left_closed") return NodeScheme::periodic_left_closed;
  throw PreconditionError("unknown grid scheme tag: " + s);
}

}  // namespace

void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot open for writing: " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) out << format_sci(m(r, c)) << "\n";
  if (!out) throw NumericalError("write failed: " + path);
}

Eigen::MatrixXd read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("%%MatrixMarket matrix array real general", 0) != 0)
    throw PreconditionError("not a real general array MatrixMarket file: " + path);
  do {
    if (!std::getline(in, line)) throw PreconditionError("truncated MatrixMarket file: " + path);
  } while (!line.empty() && line[0] == '%');
  std::istringstream dims(line);
  int rows = 0, cols = 0;
  if (!(dims >> rows >> cols) || rows <= 0 || cols <= 0)
    throw PreconditionError("bad MatrixMarket dimensions in: " + path);
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      if (!std::getline(in, line))
        throw PreconditionError("truncated MatrixMarket data in: " + path);
      m(r, c) = parse_sci(line);
    }
  return m;
}

void export_operator(const OperatorHandle& op, const std::string& path) {
  write_matrix_market(path, op.matrix);
  nlohmann::json j;
  j["name"] = op.name;
  j["bc"] = to_string(op.grid->scheme);
  j["interval"] = {op.grid->a, op.grid->b};
  j["n"] = op.grid->n;
  j["weights"] = nlohmann::json::array();
  for (int i = 0; i < op.grid->weights.size(); ++i) j["weights"].push_back(op.grid->weights[i]);
  j["family"] = op.family;
  std::ofstream out(path + ".json");
  if (!out) throw PreconditionError("cannot open for writing: " + path + ".json");
  out << j.dump(2) << "\n";
}

OperatorHandle import_operator(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix_market(path);
  std::ifstream in(path + ".json");
  if (!in) throw PreconditionError("missing sidecar metadata: " + path + ".json");
  nlohmann::json j;
  in >> j;

  const auto scheme = scheme_from_string(j.at("bc").get<std::string>());
  const double a = j.at("interval").at(0).get<double>();
  const double b = j.at("interval").at(1).get<double>();
  const int n = j.at("n").get<int>();
  const GridPtr grid = GridSpec::make(a, b, n, scheme);

  const auto& jw = j.at("weights");
  if (static_cast<int>(jw.size()) != n)
    throw PreconditionError("sidecar weights length does not match n: " + path + ".json");
  for (int i = 0; i < n; ++i) {
    if (std::abs(jw.at(i).get<double>() - grid->weights[i]) > 1e-12 * std::max(1.0, grid->weights[i]))
      throw PreconditionError("sidecar weights do not match the grid scheme: " + path + ".json");
  }

  const std::string family =
      j.contains("family") ? j.at("family").get<std::string>() : std::string("custom");
  return make_custom_operator(j.at("name").get<std::string>(), grid, m, family);
}

}  // namespace evdom
