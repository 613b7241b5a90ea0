// Acceptance suite: runs every scenario once and grades ten named criteria.
// Prints exactly one [PASS]/[FAIL] line per criterion plus a summary line;
// exits nonzero when any criterion fails.
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "evdom/checkers.hpp"
#include "evdom/matrix_market.hpp"
#include "evdom/operators.hpp"
#include "evdom/reporting.hpp"
#include "evdom/scenarios.hpp"
#include "evdom/spectral.hpp"

using namespace evdom;
using nlohmann::json;

namespace {

struct Grade {
  bool pass = true;
  std::string detail;  // first failure explanation, empty when passing

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

const ScenarioCheck* find_check(const ScenarioResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

void require_checks(Grade& g, const ScenarioResult& r,
                    std::initializer_list<const char*> names) {
  for (const char* name : names) {
    const ScenarioCheck* c = find_check(r, name);
    if (!c) {
      g.require(false, r.name + ": missing check '" + name + "'");
      return;
    }
    g.require(c->pass, r.name + ": check '" + std::string(name) + "' failed (" + c->summary + ")");
  }
}

void require_all_checks(Grade& g, const ScenarioResult& r) {
  for (const auto& c : r.checks)
    g.require(c.pass, r.name + ": check '" + c.name + "' failed (" + c.summary + ")");
}

/// earliest_pass recorded in a scenario check's domination brief.
double earliest_from(const ScenarioResult& r, const std::string& name) {
  const ScenarioCheck* c = find_check(r, name);
  if (!c) return std::nan("");
  const json d = json::parse(c->details_json);
  if (!d.contains("earliest_pass") || d["earliest_pass"].is_null()) return std::nan("");
  return d["earliest_pass"].get<double>();
}

void require_near(Grade& g, const std::string& label, double got, double want, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: got %.12g, expected %.12g (tol %.1e)", label.c_str(), got,
                want, tol);
  g.require(std::isfinite(got) && std::abs(got - want) <= tol, buf);
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  const ScenarioOptions opts;  // per-scenario defaults
  const ScenarioResult rank_one = scenario_rank_one(opts);
  const ScenarioResult antisym = scenario_antisym_vs_neumann(opts);
  const ScenarioResult nonlocal = scenario_nonlocal_beta(opts);
  const ScenarioResult sandwich = scenario_sandwich(opts);
  const ScenarioResult odd = scenario_odd_order(opts);
  const ScenarioResult cesaro = scenario_cesaro(opts);

  std::vector<std::pair<std::string, Grade>> criteria;

  {
    Grade g;
    require_checks(g, rank_one, {"projections_idempotent", "spectral_bounds",
                                 "closed_form_semigroup", "closed_form_resolvent"});
    criteria.emplace_back("rank-one pair: closed-form semigroup/resolvent and spectral bounds", g);
  }
  {
    Grade g;
    require_checks(g, rank_one, {"individual_domination_f1", "individual_domination_f2",
                                 "individual_domination_f4"});
    criteria.emplace_back("rank-one pair: individual eventual domination at predicted onsets", g);
  }
  {
    Grade g;
    require_checks(g, rank_one, {"uniform_failure", "converse_witness"});
    criteria.emplace_back("rank-one pair: uniform domination fails with a converse witness", g);
  }
  {
    Grade g;
    require_checks(g, rank_one, {"window_right_f2", "window_left_f2"});
    criteria.emplace_back("rank-one pair: resolvent windows with exact dyadic deltas", g);
  }
  {
    Grade g;
    require_all_checks(g, antisym);
    criteria.emplace_back(
        "antisymmetric vs neumann: sign-changing projection, eventual (not all-t) domination", g);
  }
  {
    Grade g;
    require_all_checks(g, nonlocal);
    criteria.emplace_back(
        "nonlocal boundary family: transcendental spectra, domination, and windows", g);
  }
  {
    Grade g;
    require_all_checks(g, sandwich);
    criteria.emplace_back(
        "dirichlet/nonlocal-symmetric/neumann sandwich: orderings, sweeps, windows", g);
  }
  {
    Grade g;
    require_all_checks(g, odd);
    criteria.emplace_back(
        "odd-order pair: exact symbols, maximum principle, non-ergodicity, converse witness", g);
  }
  {
    Grade g;
    require_all_checks(g, cesaro);
    criteria.emplace_back("cesaro means: 1/r convergence and four-way equivalence audits", g);
  }
  {
    Grade g;

    // Deterministic rebuild: identical bytes for an independent scenario run.
    const std::string once = scenario_result_to_json(scenario_odd_order(opts), nullptr);
    const std::string twice = scenario_result_to_json(scenario_odd_order(opts), nullptr);
    g.require(once == twice, "odd-order scenario JSON differs between reruns");

    // Frozen transcendental roots.
    require_near(g, "mu(-0.40)", solve_transcendental_mu(-0.40), 0.414777414561, 1e-9);
    require_near(g, "mu(-0.25)", solve_transcendental_mu(-0.25), 0.305339103305, 1e-9);
    require_near(g, "mu(-0.10)", solve_transcendental_mu(-0.10), 0.183478772723, 1e-9);

    // Frozen spectral bounds at the default scenario resolutions.
    require_near(g, "s(dirichlet, n=126)",
                 analyze(build_laplacian(BoundaryKind::dirichlet, 126))->spectral_bound,
                 -9.869101130047, 1e-7);
    require_near(g, "s(nonlocal-symmetric, n=128)",
                 analyze(build_laplacian(BoundaryKind::nonlocal_symmetric, 128))->spectral_bound,
                 -2.960716360577, 1e-7);
    require_near(g, "s(nonlocal-beta, beta=-0.4, n=128)",
                 analyze(build_laplacian(BoundaryKind::nonlocal_beta, 128, -0.4))->spectral_bound,
                 -0.172043241888, 1e-7);
    require_near(g, "s(nonlocal-beta, beta=-0.1, n=128)",
                 analyze(build_laplacian(BoundaryKind::nonlocal_beta, 128, -0.1))->spectral_bound,
                 -0.033664524769, 1e-7);

    // Frozen earliest uniform-domination onsets recorded by the scenarios.
    require_near(g, "earliest(dirichlet <= middle)",
                 earliest_from(sandwich, "uniform_dirichlet_below_middle"), 0.195626050, 1e-8);
    require_near(g, "earliest(middle <= neumann)",
                 earliest_from(sandwich, "uniform_middle_below_neumann"), 0.106173770, 1e-8);
    require_near(g, "earliest(antisymmetric <= neumann)",
                 earliest_from(antisym, "uniform_eventual_domination"), 0.559247582, 1e-8);
    require_near(g, "earliest(nonlocal beta1 <= beta2)",
                 earliest_from(nonlocal, "uniform_eventual_domination"), 2.056643367, 1e-8);

    // Serialization round-trips: report JSON and operator files.
    const RankOneExampleBundle bundle = build_rank_one_example(16);
    const DominationReport rep =
        check_uniform_semigroup_domination(bundle.A, bundle.B, TimeGrid::linspace(0.2, 2.0, 6));
    g.require(domination_report_from_json(domination_report_to_json(rep, nullptr)) == rep,
              "domination report JSON round-trip is not exact");
    const OperatorHandle mid = build_laplacian(BoundaryKind::nonlocal_symmetric, 32);
    const std::string path = "evdom_acceptance_roundtrip.mtx";
    export_operator(mid, path);
    const OperatorHandle back = import_operator(path);
    g.require((back.matrix - mid.matrix).cwiseAbs().maxCoeff() == 0.0 &&
                  back.grid->same_layout(*mid.grid),
              "operator export/import round-trip is not exact");
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());

    criteria.emplace_back("determinism, frozen regression values, serialization round-trips", g);
  }

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto& [label, grade] = criteria[i];
    if (grade.pass) {
      std::printf("[PASS] criterion %2zu: %s\n", i + 1, label.c_str());
    } else {
      ++failed;
      std::printf("[FAIL] criterion %2zu: %s\n       %s\n", i + 1, label.c_str(),
                  grade.detail.c_str());
    }
  }
  const double seconds =
      std::chrono::duration_cast<std::chrono::duration<double>>(clock::now() - t0).count();
  std::printf("acceptance: %zu/%zu criteria passed in %.1f s\n", criteria.size() - failed,
              criteria.size(), seconds);
  return failed == 0 ? 0 : 1;
}
