#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evdom/checkers.hpp"
#include "evdom/errors.hpp"
#include "evdom/evolution.hpp"
#include "evdom/operators.hpp"
#include "evdom/spectral.hpp"

using namespace evdom;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("time grids") {
  SUBCASE("linspace and logspace hit the endpoints exactly") {
    const TimeGrid lin = TimeGrid::linspace(0.5, 2.0, 7);
    CHECK(lin.values.size() == 7);
    CHECK(lin.values.front() == 0.5);
    CHECK(lin.values.back() == 2.0);
    CHECK(lin.values[3] == doctest::Approx(1.25));

    const TimeGrid log = TimeGrid::logspace(0.01, 100.0, 5);
    CHECK(log.values.front() == 0.01);
    CHECK(log.values.back() == 100.0);
    CHECK(log.values[2] == doctest::Approx(1.0).epsilon(1e-12));
    for (size_t i = 1; i < log.values.size(); ++i) CHECK(log.values[i] > log.values[i - 1]);
  }
  SUBCASE("count of one collapses to t_min") {
    CHECK(TimeGrid::linspace(0.3, 9.0, 1).values == std::vector<double>{0.3});
  }
  SUBCASE("parse forms") {
    CHECK(TimeGrid::parse("lin:1:3:3").values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(TimeGrid::parse("log:0.1:10:3").values[1] == doctest::Approx(1.0));
    CHECK(TimeGrid::parse("list:3,1,2").values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(TimeGrid::parse("geom:1:2:3"), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::parse("list:1,1,2"), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::parse("lin:1:2:0"), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::parse("log:-1:2:4"), PreconditionError);
  }
  SUBCASE("verdict and side names") {
    CHECK(std::string(to_string(DominationVerdict::eventual_domination_observed)) ==
          "eventual_domination_observed");
    CHECK(std::string(to_string(WindowVerdict::window_observed)) == "window_observed");
    CHECK(std::string(to_string(Side::left)) == "left");
  }
}

TEST_CASE("rank-one pair: margins follow the projection algebra") {
  const int n = 64;
  const RankOneExampleBundle bundle = build_rank_one_example(n);
  const GridPtr g = bundle.B.grid;
  const LatticeVector u = ones_like(g);

  SUBCASE("individual margin equals (1 - e^-t)(I_B - e^(-t/2) I_A)") {
    const LatticeVector f = test_function_fn(2, g);
    const double ia = weighted_inner(bundle.phi_A, f);
    const double ib = weighted_inner(bundle.phi_B, f);
    TimeGrid grid;
    grid.values = {0.4, 1.0, 3.0};
    const DominationReport rep =
        check_individual_semigroup_domination(bundle.A, bundle.B, f, u, grid);
    CHECK(rep.mode == "individual");
    CHECK(rep.rescaled_by == doctest::Approx(0.0).epsilon(1e-9));
    for (const auto& s : rep.samples) {
      const double predicted =
          (1.0 - std::exp(-s.param)) * (ib - std::exp(-0.5 * s.param) * ia);
      CHECK(s.margin == doctest::Approx(predicted).epsilon(1e-10));
    }
  }
  SUBCASE("frozen continuum constants at moderate resolution") {
    const RankOneExampleBundle fine = build_rank_one_example(128);
    const GridPtr gf = fine.B.grid;
    const LatticeVector uf = ones_like(gf);
    TimeGrid t1;
    t1.values = {1.0};
    const double m1 = check_individual_semigroup_domination(fine.A, fine.B,
                                                            test_function_fn(1, gf), uf, t1)
                          .samples[0]
                          .margin;
    CHECK(m1 == doctest::Approx(0.019006603161).epsilon(1e-3));
    const double m2 = check_individual_semigroup_domination(fine.A, fine.B,
                                                            test_function_fn(2, gf), uf, t1)
                          .samples[0]
                          .margin;
    CHECK(m2 == doctest::Approx(-0.043173411655).epsilon(1e-3));
    TimeGrid t2;
    t2.values = {2.0};
    const double m3 = check_individual_semigroup_domination(fine.A, fine.B,
                                                            test_function_fn(3, gf), uf, t2)
                          .samples[0]
                          .margin;
    CHECK(m3 == doctest::Approx(-0.020990776328).epsilon(1e-3));
    // Resolvent difference at lambda = 1 for f_1: the gauge floor is 1/30.
    const Eigen::VectorXd f1 = test_function_fn(1, gf).values;
    const Eigen::VectorXd diff = resolvent(fine.B, 1.0).matrix * f1.cwiseAbs() -
                                 (resolvent(fine.A, 1.0).matrix * f1).cwiseAbs();
    CHECK(diff.minCoeff() == doctest::Approx(1.0 / 30).epsilon(1e-3));
  }
  SUBCASE("verdict taxonomy across sweep placements") {
    const LatticeVector f = test_function_fn(1, g);
    const double ia = weighted_inner(bundle.phi_A, f);
    const double ib = weighted_inner(bundle.phi_B, f);
    const double t_star = -2.0 * std::log(ib / ia);
    CHECK(t_star == doctest::Approx(0.811).epsilon(0.01));

    const DominationReport all_pass = check_individual_semigroup_domination(
        bundle.A, bundle.B, f, u, TimeGrid::linspace(1.0, 5.0, 9));
    CHECK(all_pass.verdict == DominationVerdict::domination_for_all_sampled_t);
    CHECK(all_pass.earliest_pass == 1.0);
    CHECK_FALSE(all_pass.witness.has_value());

    const DominationReport all_fail = check_individual_semigroup_domination(
        bundle.A, bundle.B, f, u, TimeGrid::linspace(0.05, 0.5, 9));
    CHECK(all_fail.verdict == DominationVerdict::no_domination_in_window);
    CHECK_FALSE(all_fail.earliest_pass.has_value());
    REQUIRE(all_fail.witness.has_value());
    CHECK(all_fail.witness->rhs < all_fail.witness->lhs);

    const DominationReport straddle = check_individual_semigroup_domination(
        bundle.A, bundle.B, f, u, TimeGrid::linspace(0.05, 5.0, 100));
    CHECK(straddle.verdict == DominationVerdict::eventual_domination_observed);
    REQUIRE(straddle.earliest_pass.has_value());
    CHECK(*straddle.earliest_pass >= t_star - 1e-9);
    CHECK(*straddle.earliest_pass <= t_star + (5.0 - 0.05) / 99 + 1e-9);
  }
  SUBCASE("uniform mode fails at every t and witnesses the left edge") {
    const DominationReport rep = check_uniform_semigroup_domination(
        bundle.A, bundle.B, TimeGrid::linspace(0.1, 6.0, 12));
    CHECK(rep.mode == "uniform_entrywise");
    CHECK(rep.verdict == DominationVerdict::no_domination_in_window);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->index == rep.witness->row * n + rep.witness->col);
    CHECK(rep.witness->col <= 1);  // the density 2x vanishes at the left edge
    CHECK(rep.witness->rhs < rep.witness->lhs);
    for (const auto& s : rep.samples) CHECK(std::isnan(s.rank_one_c) == false);
  }
  SUBCASE("custom u and phi feed the rank-one lower bound") {
    const LatticeVector u2(g, Eigen::VectorXd::Constant(n, 2.0));
    const LatticeVector phi = ones_like(g);
    const OperatorHandle& neu_a = bundle.B;
    const DominationReport rep = check_uniform_semigroup_domination(
        neu_a, neu_a, TimeGrid::linspace(0.5, 2.0, 4), 1e-10, &u2, &phi);
    // B dominates itself with c = 0 exactly.
    CHECK(rep.verdict == DominationVerdict::domination_for_all_sampled_t);
    for (const auto& s : rep.samples) CHECK(std::abs(s.rank_one_c) <= 1e-12);
  }
}

TEST_CASE("resolvent windows and principle checks") {
  const RankOneExampleBundle bundle = build_rank_one_example(64);
  const GridPtr g = bundle.B.grid;
  const LatticeVector u = ones_like(g);
  const LatticeVector f2 = test_function_fn(2, g);

  SUBCASE("frozen window sizes for the sign-flipping test function") {
    const WindowReport right =
        check_resolvent_domination_window(bundle.A, bundle.B, f2, u, 0.0, Side::right);
    CHECK(right.verdict == WindowVerdict::window_observed);
    CHECK(right.delta_found == 0.25);
    const WindowReport left =
        check_resolvent_domination_window(bundle.A, bundle.B, f2, u, 0.0, Side::left);
    CHECK(left.verdict == WindowVerdict::window_observed);
    CHECK(left.delta_found == 0.03125);
    for (const auto& s : right.samples) {
      CHECK(s.offset == std::abs(s.lambda - 0.0));
      CHECK_FALSE(s.skipped);
    }
  }
  SUBCASE("lambda0 must match s(B) and avoid the spectrum of A") {
    CHECK_THROWS_AS(
        check_resolvent_domination_window(bundle.A, bundle.B, f2, u, 0.3, Side::right),
        PreconditionError);
    // s(B) = 0 but -0.5 is an eigenvalue of A: shift B so its bound lands there.
    const OperatorHandle shifted_b = shift_operator(bundle.B, 0.5);
    CHECK_THROWS_AS(check_resolvent_domination_window(bundle.A, shifted_b, f2, u, -0.5,
                                                      Side::right),
                    PreconditionError);
  }
  SUBCASE("maximum principle on the Neumann operator at 0") {
    const OperatorHandle neu = build_laplacian(BoundaryKind::neumann, 32);
    const LatticeVector f = sample(neu.grid, [](double x) {
      const double z = (x - 0.3) / 0.1;
      return std::exp(-z * z);
    });
    const LatticeVector ones = ones_like(neu.grid);
    const WindowReport right = check_max_antimax(neu, f, ones, 0.0, Side::right);
    CHECK(right.mode == "max_principle");
    CHECK(right.verdict != WindowVerdict::no_window_observed);
    CHECK(right.delta_found > 0.0);
    const WindowReport left = check_max_antimax(neu, f, ones, 0.0, Side::left);
    CHECK(left.mode == "anti_max_principle");
    CHECK(left.delta_found > 0.0);
    // (lambda - lambda0) Res(lambda) f -> P f: margins approach mean(f) > 0.
    const double mean_f = weighted_inner(ones, f) / 1.0;
    CHECK(right.samples.back().margin == doctest::Approx(mean_f).epsilon(0.05));
  }
  SUBCASE("principle preconditions") {
    const OperatorHandle neu = build_laplacian(BoundaryKind::neumann, 32);
    const LatticeVector ones = ones_like(neu.grid);
    Eigen::VectorXd neg = Eigen::VectorXd::Ones(32);
    neg[5] = -0.2;
    CHECK_THROWS_AS(check_max_antimax(neu, LatticeVector(neu.grid, neg), ones, 0.0, Side::right),
                    PreconditionError);
    CHECK_THROWS_AS(check_max_antimax(neu, ones, ones, 0.7, Side::right), PreconditionError);
    CHECK_THROWS_AS(
        check_max_antimax(neu, LatticeVector(neu.grid, Eigen::VectorXd::Zero(32)), ones, 0.0,
                          Side::right),
        PreconditionError);
  }
}

TEST_CASE("converse witness search") {
  SUBCASE("finds a violation for the rank-one pair") {
    const RankOneExampleBundle bundle = build_rank_one_example(32);
    const auto w = search_converse_witness(bundle.A, bundle.B, 0.0, 64, 7);
    REQUIRE(w.has_value());
    CHECK((w->kind == "domination" || w->kind == "positivity"));
    CHECK(w->node >= 0);
    CHECK(w->node < 32);
    CHECK(w->f.minCoeff() >= 0.0);
    // Replay the witness: the reported component really violates the order.
    const Eigen::VectorXd ra = resolvent(bundle.A, w->lambda).matrix * w->f;
    const Eigen::VectorXd rb = resolvent(bundle.B, w->lambda).matrix * w->f;
    if (w->kind == "positivity") {
      CHECK(ra[w->node] < 0.0);
    } else {
      CHECK(ra[w->node] > rb[w->node]);
    }
  }
  SUBCASE("identical operators are rejected") {
    const OperatorHandle neu = build_laplacian(BoundaryKind::neumann, 16);
    CHECK_THROWS_AS(search_converse_witness(neu, neu, 0.0), PreconditionError);
  }
  SUBCASE("grid mismatch is rejected") {
    const OperatorHandle a = build_laplacian(BoundaryKind::dirichlet, 14);
    const OperatorHandle b = build_laplacian(BoundaryKind::neumann, 16);
    CHECK_THROWS_AS(search_converse_witness(a, b, 0.0), PreconditionError);
  }
  SUBCASE("lambda0 must be an eigenvalue of the dominating operator") {
    const RankOneExampleBundle bundle = build_rank_one_example(32);
    CHECK_THROWS_AS(search_converse_witness(bundle.A, bundle.B, 0.25), PreconditionError);
  }
  SUBCASE("deterministic under a fixed seed") {
    const RankOneExampleBundle bundle = build_rank_one_example(32);
    const auto w1 = search_converse_witness(bundle.A, bundle.B, 0.0, 64, 11);
    const auto w2 = search_converse_witness(bundle.A, bundle.B, 0.0, 64, 11);
    REQUIRE(w1.has_value());
    REQUIRE(w2.has_value());
    CHECK(w1->trial_index == w2->trial_index);
    CHECK(w1->lambda == w2->lambda);
    CHECK(w1->node == w2->node);
    CHECK(w1->value == w2->value);
  }
}

TEST_CASE("dirichlet embedding into closed grids") {
  const OperatorHandle dir = build_laplacian(BoundaryKind::dirichlet, 30);
  const OperatorHandle mid = build_laplacian(BoundaryKind::nonlocal_symmetric, 32);
  const GridPtr g = mid.grid;
  const LatticeVector u = ones_like(g);
  SUBCASE("individual check zero-extends the interior evolution") {
    const LatticeVector f = sample(g, [](double x) { return std::sin(2 * kPi * x); });
    const DominationReport rep = check_individual_semigroup_domination(
        dir, mid, f, u, TimeGrid::logspace(0.01, 5.0, 40));
    CHECK(rep.verdict != DominationVerdict::no_domination_in_window);
    // Hand-check one sample: dominated side is E |exp(tD) E^T f|.
    const double t = 0.5;
    Eigen::VectorXd interior(30);
    for (int i = 0; i < 30; ++i) interior[i] = f.values[i + 1];
    const Eigen::VectorXd evolved = expm(dir, t).matrix * interior;
    Eigen::VectorXd extended = Eigen::VectorXd::Zero(32);
    for (int i = 0; i < 30; ++i) extended[i + 1] = std::abs(evolved[i]);
    const Eigen::VectorXd dominating = expm(mid, t).matrix * f.values.cwiseAbs();
    const double margin = (dominating - extended).minCoeff();
    TimeGrid single;
    single.values = {t};
    const DominationReport one =
        check_individual_semigroup_domination(dir, mid, f, u, single);
    const double s_mid = analyze(mid)->spectral_bound;
    CHECK(one.samples[0].margin * std::exp(t * s_mid) ==
          doctest::Approx(margin).epsilon(1e-9));
    CHECK(one.samples[0].margin_raw == doctest::Approx(margin).epsilon(1e-9));
  }
  SUBCASE("windows accept the interior pair") {
    const LatticeVector f = sample(g, [](double x) {
      const double z = (x - 0.3) / 0.1;
      return std::exp(-z * z);
    });
    const double s_mid = analyze(mid)->spectral_bound;
    const WindowReport rep =
        check_resolvent_domination_window(dir, mid, f, u, s_mid, Side::right);
    CHECK(rep.delta_found > 0.0);
  }
  SUBCASE("incompatible grids are rejected") {
    const OperatorHandle wrong = build_laplacian(BoundaryKind::dirichlet, 20);
    const LatticeVector f = ones_like(g);
    CHECK_THROWS_AS(check_individual_semigroup_domination(wrong, mid, f, u,
                                                          TimeGrid::linspace(0.1, 1.0, 3)),
                    PreconditionError);
  }
  SUBCASE("vectors must live on the documented grids") {
    const LatticeVector f_inner = ones_like(dir.grid);
    CHECK_THROWS_AS(check_individual_semigroup_domination(dir, mid, f_inner, u,
                                                          TimeGrid::linspace(0.1, 1.0, 3)),
                    PreconditionError);
  }
}

TEST_CASE("Cesaro positivity and the equivalence audit") {
  SUBCASE("neumann: bump functions become strongly positive in mean") {
    const OperatorHandle neu = build_laplacian(BoundaryKind::neumann, 48);
    const LatticeVector f = sample(neu.grid, [](double x) {
      const double z = (x - 0.7) / 0.1;
      return std::exp(-z * z);
    });
    const DominationReport rep = check_cesaro_eventual_positivity(
        neu, f, ones_like(neu.grid), TimeGrid::logspace(0.5, 60.0, 10));
    CHECK(rep.mode == "cesaro");
    CHECK(rep.verdict != DominationVerdict::no_domination_in_window);
    for (const auto& s : rep.samples) CHECK(s.margin_raw == s.margin);
  }
  SUBCASE("antisymmetric: sign-changing mean rules positivity out") {
    const OperatorHandle as = build_laplacian(BoundaryKind::antisymmetric, 48);
    const LatticeVector f = sample(as.grid, [](double x) { return x < -0.6 ? 1.0 : 0.0; });
    const DominationReport rep = check_cesaro_eventual_positivity(
        as, f, ones_like(as.grid), TimeGrid::logspace(0.5, 60.0, 10));
    CHECK(rep.verdict == DominationVerdict::no_domination_in_window);
  }
  SUBCASE("audit shapes and determinism") {
    const OperatorHandle neu = build_laplacian(BoundaryKind::neumann, 32);
    const auto trials = make_trial_set(neu.grid, 6, 3);
    CHECK(trials.size() == 6);
    for (const auto& t : trials) {
      CHECK(t.values.minCoeff() >= 0.0);
      CHECK(t.values.maxCoeff() == doctest::Approx(1.0));
    }
    const auto trials2 = make_trial_set(neu.grid, 6, 3);
    for (size_t i = 0; i < trials.size(); ++i)
      CHECK((trials[i].values - trials2[i].values).cwiseAbs().maxCoeff() == 0.0);

    const EquivalenceAudit audit = run_equivalence_audit(
        neu, trials, ones_like(neu.grid), TimeGrid::logspace(0.5, 60.0, 8));
    CHECK(audit.per_trial.size() == 6);
    CHECK(audit.aggregate[0]);
    CHECK(audit.aggregate[1]);
    CHECK(audit.aggregate[2]);
    CHECK(audit.aggregate[3]);
    CHECK(audit.agree);
    CHECK(audit.trials_agreeing == 6);
    CHECK(audit.op_name == "neumann");
  }
}
