// evdom: build model operators, evolve them, and check eventual domination,
// eventual positivity and resolvent-window criteria from the command line.
//
// Exit codes: 0 success (and positive verdict for checks), 1 negative verdict
// (check ran but found no domination/window/witness), 2 usage or numerical
// errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evdom/checkers.hpp"
#include "evdom/errors.hpp"
#include "evdom/evolution.hpp"
#include "evdom/matrix_market.hpp"
#include "evdom/operators.hpp"
#include "evdom/parallel.hpp"
#include "evdom/reporting.hpp"
#include "evdom/scenarios.hpp"
#include "evdom/spectral.hpp"

namespace {

using nlohmann::json;
using namespace evdom;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) parts.push_back(token);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError(what + ": cannot parse '" + s + "' as a number");
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError(what + ": cannot parse '" + s + "' as an integer");
  }
}

BoundaryKind parse_bc(const std::string& name) {
  if (name == "dirichlet") return BoundaryKind::dirichlet;
  if (name == "neumann") return BoundaryKind::neumann;
  if (name == "antisymmetric") return BoundaryKind::antisymmetric;
  if (name == "periodic") return BoundaryKind::periodic;
  if (name == "nonlocal-beta") return BoundaryKind::nonlocal_beta;
  if (name == "nonlocal-symmetric") return BoundaryKind::nonlocal_symmetric;
  throw PreconditionError("unknown boundary condition '" + name + "'");
}

/// Operator specs:
///   lap:<bc>:<n>[:beta=<v>][:interval=<a>,<b>]
///   odd:<k>:<n>
///   rankone:<A|B|PA|PB>:<n>
///   mm:<path>          (Matrix Market file with its .json sidecar)
OperatorHandle parse_operator_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw PreconditionError("empty operator spec");
  const std::string& family = parts[0];

  if (family == "mm") {
    if (parts.size() != 2) throw PreconditionError("mm spec needs mm:<path>");
    return import_operator(parts[1]);
  }
  if (family == "lap") {
    if (parts.size() < 3) throw PreconditionError("lap spec needs lap:<bc>:<n>");
    LaplacianSpec ls;
    ls.bc = parse_bc(parts[1]);
    ls.n = to_int(parts[2], "lap n");
    for (size_t i = 3; i < parts.size(); ++i) {
      const auto kv = split(parts[i], '=');
      if (kv.size() != 2) throw PreconditionError("bad lap option '" + parts[i] + "'");
      if (kv[0] == "beta") {
        ls.beta = to_double(kv[1], "beta");
      } else if (kv[0] == "interval") {
        const auto ab = split(kv[1], ',');
        if (ab.size() != 2) throw PreconditionError("interval needs <a>,<b>");
        ls.interval = std::make_pair(to_double(ab[0], "interval a"), to_double(ab[1], "interval b"));
      } else {
        throw PreconditionError("unknown lap option '" + kv[0] + "'");
      }
    }
    return build_laplacian(ls);
  }
  if (family == "odd") {
    if (parts.size() != 3) throw PreconditionError("odd spec needs odd:<k>:<n>");
    return build_odd_order(to_int(parts[1], "odd k"), to_int(parts[2], "odd n"));
  }
  if (family == "rankone") {
    if (parts.size() != 3) throw PreconditionError("rankone spec needs rankone:<A|B|PA|PB>:<n>");
    const RankOneExampleBundle bundle = build_rank_one_example(to_int(parts[2], "rankone n"));
    if (parts[1] == "A") return bundle.A;
    if (parts[1] == "B") return bundle.B;
    if (parts[1] == "PA") return bundle.PA;
    if (parts[1] == "PB") return bundle.PB;
    throw PreconditionError("rankone member must be A, B, PA or PB");
  }
  throw PreconditionError("unknown operator family '" + family +
                          "' (expected lap, odd, rankone or mm)");
}

/// Vector specs on the grid of the operator being checked:
///   ones | fn:<N> | bump:<center>:<width> | indicator:<a>:<b> | sin:<freq>
///   coord:<i> | file:<path>   (one value per line)
LatticeVector parse_vector_spec(const std::string& spec, const GridPtr& grid) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw PreconditionError("empty vector spec");
  const std::string& kind = parts[0];

  if (kind == "ones" && parts.size() == 1) return ones_like(grid);
  if (kind == "fn" && parts.size() == 2)
    return test_function_fn(to_int(parts[1], "fn index"), grid);
  if (kind == "bump" && parts.size() == 3) {
    const double center = to_double(parts[1], "bump center");
    const double width = to_double(parts[2], "bump width");
    if (width <= 0) throw PreconditionError("bump width must be positive");
    return sample(grid, [=](double x) {
      const double z = (x - center) / width;
      return std::exp(-z * z);
    });
  }
  if (kind == "indicator" && parts.size() == 3) {
    const double a = to_double(parts[1], "indicator a");
    const double b = to_double(parts[2], "indicator b");
    return sample(grid, [=](double x) { return (x >= a && x <= b) ? 1.0 : 0.0; });
  }
  if (kind == "sin" && parts.size() == 2) {
    const double freq = to_double(parts[1], "sin freq");
    const double a = grid->a, len = grid->b - grid->a;
    return sample(grid, [=](double x) {
      return std::sin(freq * 3.14159265358979323846 * (x - a) / len);
    });
  }
  if (kind == "coord" && parts.size() == 2) {
    const int i = to_int(parts[1], "coord index");
    if (i < 0 || i >= grid->n) throw PreconditionError("coord index out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid->n);
    v[i] = 1.0;
    return LatticeVector(grid, v);
  }
  if (kind == "file" && parts.size() == 2) {
    std::ifstream in(parts[1]);
    if (!in) throw PreconditionError("cannot open vector file '" + parts[1] + "'");
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      values.push_back(to_double(line, "vector file entry"));
    }
    if (static_cast<int>(values.size()) != grid->n)
      throw PreconditionError("vector file has " + std::to_string(values.size()) +
                              " entries, grid has " + std::to_string(grid->n));
    Eigen::VectorXd v(grid->n);
    for (int i = 0; i < grid->n; ++i) v[i] = values[i];
    return LatticeVector(grid, v);
  }
  throw PreconditionError("unknown vector spec '" + spec + "'");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw PreconditionError("cannot open output file '" + out_path + "'");
  out << text;
}

struct CommonOutput {
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 42;
  double eps = 1e-10;

  void attach(CLI::App* cmd, bool with_check_knobs = true) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_check_knobs) {
      cmd->add_option("--seed", seed, "seed for randomized trial vectors");
      cmd->add_option("--eps", eps, "strictness margin for pass/fail decisions");
    }
  }

  RunConfig config(const std::string& command,
                   std::map<std::string, std::string> parameters) const {
    RunConfig cfg;
    cfg.command = command;
    cfg.parameters = std::move(parameters);
    cfg.output_format = format;
    cfg.output_path = out_path;
    cfg.seed = seed;
    cfg.eps = eps;
    return cfg;
  }
};

json operator_summary(const OperatorHandle& op) {
  const auto sd = analyze(op);
  json j;
  j["name"] = op.name;
  j["family"] = op.family;
  j["n"] = op.grid->n;
  j["interval"] = {op.grid->a, op.grid->b};
  j["scheme"] = to_string(op.grid->scheme);
  j["weighted_symmetric"] = op.weighted_symmetric;
  j["norm_max"] = op.matrix.cwiseAbs().maxCoeff();
  j["spectral_bound"] = sd->spectral_bound;
  j["dominant_eigenvalue"] = sd->dominant;
  j["spectral_gap"] = sd->gap;
  if (!op.exact_spectrum.empty()) {
    json model = json::array();
    for (const auto& ev : op.exact_spectrum)
      model.push_back({{"re", ev.value.real()}, {"im", ev.value.imag()}, {"label", ev.description}});
    j["model_spectrum"] = model;
  }
  return j;
}

std::string vector_values_json(const LatticeVector& v, const std::string& label, double param,
                               const std::string& method, const RunConfig& cfg) {
  json j;
  j["config"] = json::parse(domination_report_to_json(DominationReport{}, &cfg))["config"];
  j["kind"] = label;
  j["param"] = param;
  j["method"] = method;
  j["values"] = std::vector<double>(v.values.data(), v.values.data() + v.values.size());
  j["nodes"] = std::vector<double>(v.grid->nodes.data(), v.grid->nodes.data() + v.grid->n);
  return j.dump(2);
}

std::string vector_values_csv(const LatticeVector& v, const RunConfig& cfg) {
  std::string out;
  out += "# command=" + cfg.command + "\n";
  for (const auto& [k, val] : cfg.parameters) out += "# " + k + "=" + val + "\n";
  out += "node,x,value\n";
  for (int i = 0; i < v.size(); ++i)
    out += std::to_string(i) + "," + format_sci(v.grid->nodes[i]) + "," +
           format_sci(v.values[i]) + "\n";
  return out;
}

/// Evolve-and-apply body shared by semigroup/resolvent/cesaro.
int run_evolution(const std::string& command, const OperatorHandle& op, double param,
                  const std::string& f_spec, const CommonOutput& io,
                  const std::function<EvolutionSample()>& evaluate) {
  const EvolutionSample sample = evaluate();
  std::map<std::string, std::string> params{{"op", op.name},
                                            {"param", format_sci(param)},
                                            {"method", sample.method}};
  if (!f_spec.empty()) params["f"] = f_spec;
  const RunConfig cfg = io.config(command, params);

  if (f_spec.empty()) {
    if (io.out_path.empty())
      throw PreconditionError(command + " without --f writes a matrix; --out is required");
    write_matrix_market(io.out_path, sample.matrix);
    return kExitOk;
  }
  const LatticeVector f = parse_vector_spec(f_spec, op.grid);
  const LatticeVector result(op.grid, sample.matrix * f.values);
  emit(io.format == "csv" ? vector_values_csv(result, cfg)
                          : vector_values_json(result, command, param, sample.method, cfg),
       io.out_path);
  return kExitOk;
}

int scenario_exit(const std::vector<ScenarioResult>& results, const std::string& out_path) {
  bool all_pass = true;
  json doc = json::array();
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("scenario %-22s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL");
    for (const auto& c : r.checks)
      std::printf("  [%s] %s: %s\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.summary.c_str());
    doc.push_back(json::parse(scenario_result_to_json(r)));
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw PreconditionError("cannot open output file '" + out_path + "'");
    out << (results.size() == 1 ? doc[0].dump(2) : doc.dump(2));
  }
  return all_pass ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evdom: eventual domination and positivity checks for discretized semigroups"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (default: all cores)");

  // ---- op-build ----------------------------------------------------------
  auto* op_build = app.add_subcommand("op-build", "build an operator and print its summary");
  std::string ob_spec;
  CommonOutput ob_io;
  op_build->add_option("--op", ob_spec, "operator spec")->required();
  ob_io.attach(op_build, false);

  // ---- spectrum ----------------------------------------------------------
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and spectral summary");
  std::string sp_spec;
  CommonOutput sp_io;
  spectrum->add_option("--op", sp_spec, "operator spec")->required();
  sp_io.attach(spectrum, false);

  // ---- semigroup / resolvent / cesaro ------------------------------------
  auto* semigroup = app.add_subcommand("semigroup", "exp(tA), as a matrix or applied to f");
  std::string sg_spec, sg_f;
  double sg_t = 1.0;
  CommonOutput sg_io;
  semigroup->add_option("--op", sg_spec, "operator spec")->required();
  semigroup->add_option("--t", sg_t, "time")->required();
  semigroup->add_option("--f", sg_f, "vector spec; omit to export the matrix");
  sg_io.attach(semigroup, false);

  auto* resolvent_cmd = app.add_subcommand("resolvent", "(lambda - A)^-1, matrix or applied to f");
  std::string rs_spec, rs_f;
  double rs_lambda = 1.0;
  CommonOutput rs_io;
  resolvent_cmd->add_option("--op", rs_spec, "operator spec")->required();
  resolvent_cmd->add_option("--lambda", rs_lambda, "resolvent point")->required();
  resolvent_cmd->add_option("--f", rs_f, "vector spec; omit to export the matrix");
  rs_io.attach(resolvent_cmd, false);

  auto* cesaro_cmd = app.add_subcommand("cesaro", "Cesaro mean C(r), matrix or applied to f");
  std::string cs_spec, cs_f;
  double cs_r = 1.0;
  int cs_quad = 12;
  CommonOutput cs_io;
  cesaro_cmd->add_option("--op", cs_spec, "operator spec")->required();
  cesaro_cmd->add_option("--r", cs_r, "averaging radius")->required();
  cesaro_cmd->add_option("--f", cs_f, "vector spec; omit to export the matrix");
  cesaro_cmd->add_option("--quad-points", cs_quad, "Gauss-Legendre nodes per panel");
  cs_io.attach(cesaro_cmd, false);

  // ---- check -------------------------------------------------------------
  auto* check = app.add_subcommand("check", "domination / window / positivity checks");
  check->require_subcommand(1);

  auto* dominate = check->add_subcommand("dominate", "semigroup domination sweep");
  std::string dm_a, dm_b, dm_f, dm_u, dm_phi, dm_mode = "individual", dm_grid = "log:0.01:20:120";
  CommonOutput dm_io;
  dominate->add_option("--A", dm_a, "dominated operator spec")->required();
  dominate->add_option("--B", dm_b, "dominating operator spec")->required();
  dominate->add_option("--mode", dm_mode, "individual or uniform")
      ->check(CLI::IsMember({"individual", "uniform"}));
  dominate->add_option("--f", dm_f, "vector spec (individual mode)");
  dominate->add_option("--u", dm_u, "gauge vector spec (default ones)");
  dominate->add_option("--phi", dm_phi, "lower-bound density spec (uniform mode)");
  dominate->add_option("--grid", dm_grid, "time grid: log:a:b:n, lin:a:b:n or list:v1,v2,...");
  dm_io.attach(dominate);

  auto* window = check->add_subcommand("window", "resolvent domination window at lambda0");
  std::string wd_a, wd_b, wd_f, wd_u, wd_side = "right", wd_lambda = "auto";
  CommonOutput wd_io;
  window->add_option("--A", wd_a, "dominated operator spec")->required();
  window->add_option("--B", wd_b, "dominating operator spec")->required();
  window->add_option("--f", wd_f, "vector spec")->required();
  window->add_option("--u", wd_u, "gauge vector spec (default ones)");
  window->add_option("--side", wd_side, "right or left")
      ->check(CLI::IsMember({"right", "left"}));
  window->add_option("--lambda0", wd_lambda, "window base point (auto = s(B))");
  wd_io.attach(window);

  auto* maxmin = check->add_subcommand("max-antimax", "maximum / anti-maximum principle window");
  std::string mm_op, mm_f, mm_u, mm_side = "right", mm_lambda = "auto";
  CommonOutput mm_io;
  maxmin->add_option("--op", mm_op, "operator spec")->required();
  maxmin->add_option("--f", mm_f, "vector spec, nonnegative")->required();
  maxmin->add_option("--u", mm_u, "gauge vector spec (default ones)");
  maxmin->add_option("--side", mm_side, "right (maximum) or left (anti-maximum)")
      ->check(CLI::IsMember({"right", "left"}));
  maxmin->add_option("--lambda0", mm_lambda, "principle base point (auto = s(op))");
  mm_io.attach(maxmin);

  auto* converse = check->add_subcommand("converse", "search for a resolvent-domination violation");
  std::string cv_a, cv_b, cv_lambda = "auto";
  int cv_trials = 200;
  CommonOutput cv_io;
  converse->add_option("--A", cv_a, "dominated operator spec")->required();
  converse->add_option("--B", cv_b, "dominating operator spec")->required();
  converse->add_option("--lambda0", cv_lambda, "base point (auto = s(B))");
  converse->add_option("--trials", cv_trials, "trial vector budget");
  cv_io.attach(converse);

  auto* cpos = check->add_subcommand("cesaro-positivity", "Cesaro eventual strong positivity");
  std::string cp_op, cp_f, cp_u, cp_grid = "log:0.5:80:16";
  int cp_quad = 12;
  CommonOutput cp_io;
  cpos->add_option("--op", cp_op, "operator spec")->required();
  cpos->add_option("--f", cp_f, "vector spec")->required();
  cpos->add_option("--u", cp_u, "gauge vector spec (default ones)");
  cpos->add_option("--grid", cp_grid, "radius grid");
  cpos->add_option("--quad-points", cp_quad, "Gauss-Legendre nodes per panel");
  cp_io.attach(cpos);

  auto* audit = check->add_subcommand("audit", "four-way equivalence audit over a trial set");
  std::string au_op, au_u, au_grid = "log:0.5:80:16";
  int au_trials = 24, au_quad = 12;
  CommonOutput au_io;
  audit->add_option("--op", au_op, "operator spec")->required();
  audit->add_option("--u", au_u, "gauge vector spec (default ones)");
  audit->add_option("--grid", au_grid, "radius grid");
  audit->add_option("--trials", au_trials, "number of trial vectors");
  audit->add_option("--quad-points", au_quad, "Gauss-Legendre nodes per panel");
  au_io.attach(audit);

  // ---- scenario ----------------------------------------------------------
  auto* scenario = app.add_subcommand("scenario", "run a bundled scenario (or 'all')");
  std::string sc_name;
  ScenarioOptions sc_opts;
  std::string sc_out;
  scenario->add_option("name", sc_name,
                       "rank-one | antisym-vs-neumann | nonlocal-beta | sandwich | "
                       "odd-order | cesaro | all")
      ->required();
  scenario->add_option("--n-grid", sc_opts.n_grid, "eigenvalue-resolution grid size");
  scenario->add_option("--sweep-n", sc_opts.sweep_n, "semigroup sweep grid size");
  scenario->add_option("--count", sc_opts.count, "samples per sweep");
  scenario->add_option("--seed", sc_opts.seed, "randomized trial seed");
  scenario->add_option("--eps", sc_opts.eps, "strictness margin");
  scenario->add_option("--quad-points", sc_opts.quad_points, "quadrature nodes per panel");
  scenario->add_option("--beta1", sc_opts.beta1, "nonlocal-beta: first coupling");
  scenario->add_option("--beta2", sc_opts.beta2, "nonlocal-beta: second coupling");
  scenario->add_option("--m", sc_opts.m, "odd-order: first order parameter");
  scenario->add_option("--l", sc_opts.l, "odd-order: second order parameter");
  scenario->add_option("--out", sc_out, "write the full JSON report here");

  // ---- export ------------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "write an operator as Matrix Market + sidecar");
  std::string ex_spec, ex_out;
  export_cmd->add_option("--op", ex_spec, "operator spec")->required();
  export_cmd->add_option("--out", ex_out, "output .mtx path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (threads > 0) {
    const std::string value = std::to_string(threads);
    setenv("EVDOM_THREADS", value.c_str(), 1);
  }

  try {
    if (*op_build) {
      const OperatorHandle op = parse_operator_spec(ob_spec);
      json j = operator_summary(op);
      j["config"] = {{"command", "op-build"}, {"op", ob_spec}};
      emit(j.dump(2), ob_io.out_path);
      return kExitOk;
    }

    if (*spectrum) {
      const OperatorHandle op = parse_operator_spec(sp_spec);
      const auto sd = analyze(op);
      const RunConfig cfg = sp_io.config("spectrum", {{"op", sp_spec}, {"name", op.name}});
      emit(sp_io.format == "csv" ? spectral_data_to_csv(*sd, &cfg)
                                 : spectral_data_to_json(*sd, &cfg),
           sp_io.out_path);
      return kExitOk;
    }

    if (*semigroup) {
      const OperatorHandle op = parse_operator_spec(sg_spec);
      return run_evolution("semigroup", op, sg_t, sg_f, sg_io,
                           [&] { return expm(op, sg_t); });
    }
    if (*resolvent_cmd) {
      const OperatorHandle op = parse_operator_spec(rs_spec);
      return run_evolution("resolvent", op, rs_lambda, rs_f, rs_io,
                           [&] { return resolvent(op, rs_lambda); });
    }
    if (*cesaro_cmd) {
      const OperatorHandle op = parse_operator_spec(cs_spec);
      return run_evolution("cesaro", op, cs_r, cs_f, cs_io,
                           [&] { return cesaro(op, cs_r, cs_quad); });
    }

    if (*dominate) {
      const OperatorHandle A = parse_operator_spec(dm_a);
      const OperatorHandle B = parse_operator_spec(dm_b);
      const TimeGrid grid = TimeGrid::parse(dm_grid);
      const LatticeVector u =
          dm_u.empty() ? ones_like(B.grid) : parse_vector_spec(dm_u, B.grid);
      DominationReport rep;
      if (dm_mode == "individual") {
        if (dm_f.empty()) throw PreconditionError("individual mode requires --f");
        const LatticeVector f = parse_vector_spec(dm_f, A.grid);
        rep = check_individual_semigroup_domination(A, B, f, u, grid, dm_io.eps);
      } else {
        const LatticeVector phi =
            dm_phi.empty() ? ones_like(B.grid) : parse_vector_spec(dm_phi, B.grid);
        rep = check_uniform_semigroup_domination(A, B, grid, dm_io.eps, &u, &phi);
      }
      std::map<std::string, std::string> params{
          {"A", dm_a}, {"B", dm_b}, {"mode", dm_mode}, {"grid", dm_grid}};
      if (!dm_f.empty()) params["f"] = dm_f;
      const RunConfig cfg = dm_io.config("check dominate", params);
      emit(dm_io.format == "csv" ? domination_report_to_csv(rep, &cfg)
                                 : domination_report_to_json(rep, &cfg),
           dm_io.out_path);
      return rep.verdict == DominationVerdict::no_domination_in_window ? kExitNegative : kExitOk;
    }

    if (*window) {
      const OperatorHandle A = parse_operator_spec(wd_a);
      const OperatorHandle B = parse_operator_spec(wd_b);
      const double lambda0 =
          wd_lambda == "auto" ? analyze(B)->spectral_bound : to_double(wd_lambda, "lambda0");
      const LatticeVector f = parse_vector_spec(wd_f, A.grid);
      const LatticeVector u =
          wd_u.empty() ? ones_like(B.grid) : parse_vector_spec(wd_u, B.grid);
      const Side side = wd_side == "right" ? Side::right : Side::left;
      const WindowReport rep =
          check_resolvent_domination_window(A, B, f, u, lambda0, side, wd_io.eps);
      const RunConfig cfg = wd_io.config(
          "check window", {{"A", wd_a},
                           {"B", wd_b},
                           {"f", wd_f},
                           {"side", wd_side},
                           {"lambda0", format_sci(lambda0)}});
      emit(wd_io.format == "csv" ? window_report_to_csv(rep, &cfg)
                                 : window_report_to_json(rep, &cfg),
           wd_io.out_path);
      return rep.verdict == WindowVerdict::no_window_observed ? kExitNegative : kExitOk;
    }

    if (*maxmin) {
      const OperatorHandle op = parse_operator_spec(mm_op);
      const double lambda0 =
          mm_lambda == "auto" ? analyze(op)->spectral_bound : to_double(mm_lambda, "lambda0");
      const LatticeVector f = parse_vector_spec(mm_f, op.grid);
      const LatticeVector u =
          mm_u.empty() ? ones_like(op.grid) : parse_vector_spec(mm_u, op.grid);
      const Side side = mm_side == "right" ? Side::right : Side::left;
      const WindowReport rep = check_max_antimax(op, f, u, lambda0, side, mm_io.eps);
      const RunConfig cfg = mm_io.config(
          "check max-antimax", {{"op", mm_op},
                                {"f", mm_f},
                                {"side", mm_side},
                                {"lambda0", format_sci(lambda0)}});
      emit(mm_io.format == "csv" ? window_report_to_csv(rep, &cfg)
                                 : window_report_to_json(rep, &cfg),
           mm_io.out_path);
      return rep.verdict == WindowVerdict::no_window_observed ? kExitNegative : kExitOk;
    }

    if (*converse) {
      const OperatorHandle A = parse_operator_spec(cv_a);
      const OperatorHandle B = parse_operator_spec(cv_b);
      const double lambda0 =
          cv_lambda == "auto" ? analyze(B)->spectral_bound : to_double(cv_lambda, "lambda0");
      const auto witness = search_converse_witness(A, B, lambda0, cv_trials, cv_io.seed);
      json j;
      j["config"] = {{"command", "check converse"},
                     {"A", cv_a},
                     {"B", cv_b},
                     {"lambda0", lambda0},
                     {"trials", cv_trials},
                     {"seed", cv_io.seed}};
      j["found"] = witness.has_value();
      if (witness) {
        j["witness"] = {{"trial", witness->trial_index},
                        {"lambda", witness->lambda},
                        {"node", witness->node},
                        {"value", witness->value},
                        {"kind", witness->kind},
                        {"f", std::vector<double>(witness->f.data(),
                                                  witness->f.data() + witness->f.size())}};
      }
      emit(j.dump(2), cv_io.out_path);
      return witness ? kExitOk : kExitNegative;
    }

    if (*cpos) {
      const OperatorHandle op = parse_operator_spec(cp_op);
      const LatticeVector f = parse_vector_spec(cp_f, op.grid);
      const LatticeVector u =
          cp_u.empty() ? ones_like(op.grid) : parse_vector_spec(cp_u, op.grid);
      const DominationReport rep = check_cesaro_eventual_positivity(
          op, f, u, TimeGrid::parse(cp_grid), cp_io.eps, cp_quad);
      const RunConfig cfg = cp_io.config(
          "check cesaro-positivity", {{"op", cp_op}, {"f", cp_f}, {"grid", cp_grid}});
      emit(cp_io.format == "csv" ? domination_report_to_csv(rep, &cfg)
                                 : domination_report_to_json(rep, &cfg),
           cp_io.out_path);
      return rep.verdict == DominationVerdict::no_domination_in_window ? kExitNegative : kExitOk;
    }

    if (*audit) {
      const OperatorHandle op = parse_operator_spec(au_op);
      const LatticeVector u =
          au_u.empty() ? ones_like(op.grid) : parse_vector_spec(au_u, op.grid);
      const auto trials = make_trial_set(op.grid, au_trials, au_io.seed);
      const EquivalenceAudit result = run_equivalence_audit(
          op, trials, u, TimeGrid::parse(au_grid), au_io.eps, au_quad);
      const RunConfig cfg = au_io.config(
          "check audit",
          {{"op", au_op}, {"trials", std::to_string(au_trials)}, {"grid", au_grid}});
      emit(equivalence_audit_to_json(result, &cfg), au_io.out_path);
      return result.agree ? kExitOk : kExitNegative;
    }

    if (*scenario) {
      using ScenarioFn = ScenarioResult (*)(const ScenarioOptions&);
      const std::vector<std::pair<std::string, ScenarioFn>> registry = {
          {"rank-one", scenario_rank_one},
          {"antisym-vs-neumann", scenario_antisym_vs_neumann},
          {"nonlocal-beta", scenario_nonlocal_beta},
          {"sandwich", scenario_sandwich},
          {"odd-order", scenario_odd_order},
          {"cesaro", scenario_cesaro},
      };
      std::vector<ScenarioResult> results;
      if (sc_name == "all") {
        for (const auto& [name, fn] : registry) results.push_back(fn(sc_opts));
      } else {
        bool found = false;
        for (const auto& [name, fn] : registry)
          if (name == sc_name) {
            results.push_back(fn(sc_opts));
            found = true;
          }
        if (!found) throw PreconditionError("unknown scenario '" + sc_name + "'");
      }
      return scenario_exit(results, sc_out);
    }

    if (*export_cmd) {
      export_operator(parse_operator_spec(ex_spec), ex_out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "evdom: " << e.what() << '\n';
    return kExitError;
  }

  return kExitError;  // unreachable: require_subcommand(1)
}
