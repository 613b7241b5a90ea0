#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "evdom/errors.hpp"
#include "evdom/grid.hpp"
#include "evdom/lattice.hpp"
#include "evdom/operators.hpp"
#include "evdom/parallel.hpp"

using namespace evdom;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("grid layouts, spacing and weights") {
  SUBCASE("endpoints_included uses trapezoid weights") {
    const GridPtr g = GridSpec::make(0.0, 1.0, 11, NodeScheme::endpoints_included);
    CHECK(g->spacing == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(g->nodes[0] == 0.0);
    CHECK(g->nodes[10] == 1.0);
    CHECK(g->weights[0] == doctest::Approx(0.05));
    CHECK(g->weights[5] == doctest::Approx(0.1));
    CHECK(g->weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("interior_only keeps uniform weights summing to b-a") {
    const GridPtr g = GridSpec::make(0.0, 1.0, 9, NodeScheme::interior_only);
    CHECK(g->spacing == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(g->nodes[0] == doctest::Approx(0.1));
    CHECK(g->nodes[8] == doctest::Approx(0.9));
    for (int i = 0; i < 9; ++i) CHECK(g->weights[i] == doctest::Approx(1.0 / 9));
    CHECK(g->weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("periodic_left_closed drops the right endpoint") {
    const GridPtr g = GridSpec::make(0.0, 1.0, 10, NodeScheme::periodic_left_closed);
    CHECK(g->spacing == doctest::Approx(0.1));
    CHECK(g->nodes[9] == doctest::Approx(0.9));
    CHECK(g->weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("same_layout and interior_of") {
    const GridPtr a = GridSpec::make(0.0, 1.0, 16, NodeScheme::endpoints_included);
    const GridPtr b = GridSpec::make(0.0, 1.0, 16, NodeScheme::endpoints_included);
    const GridPtr inner = GridSpec::make(0.0, 1.0, 14, NodeScheme::interior_only);
    CHECK(a->same_layout(*b));
    CHECK(inner->interior_of(*a));
    CHECK_FALSE(a->interior_of(*a));
    const GridPtr other = GridSpec::make(0.0, 2.0, 14, NodeScheme::interior_only);
    CHECK_FALSE(other->interior_of(*a));
  }
}

TEST_CASE("gauge axioms") {
  const GridPtr g = GridSpec::make(0.0, 1.0, 8, NodeScheme::endpoints_included);
  const LatticeVector u = ones_like(g);
  Eigen::VectorXd v(8);
  v << 1.0, -2.0, 0.5, 3.0, -0.25, 0.0, 1.5, 2.0;
  const LatticeVector f(g, v);

  const GaugeResult r = gauge(f, u);
  CHECK(r.lower == -2.0);
  CHECK(r.upper == 3.0);
  CHECK(r.argmin_index == 1);
  CHECK(r.argmax_index == 3);

  SUBCASE("positive scaling is homogeneous") {
    const GaugeResult r2 = gauge(LatticeVector(g, 2.0 * v), u);
    CHECK(r2.lower == doctest::Approx(2 * r.lower));
    CHECK(r2.upper == doctest::Approx(2 * r.upper));
  }
  SUBCASE("adding c*u shifts the lower bound by c") {
    const GaugeResult r2 = gauge(LatticeVector(g, v.array() + 5.0), u);
    CHECK(r2.lower == doctest::Approx(r.lower + 5.0));
  }
  SUBCASE("gauge against a scaled u divides") {
    const GaugeResult r2 = gauge(f, LatticeVector(g, 2.0 * u.values));
    CHECK(r2.lower == doctest::Approx(r.lower / 2));
    CHECK(r2.upper == doctest::Approx(r.upper / 2));
  }
  SUBCASE("strongly_positive tracks the lower gauge bound") {
    CHECK(strongly_positive(LatticeVector(g, v.array() + 2.5), u, 0.4));
    CHECK_FALSE(strongly_positive(LatticeVector(g, v.array() + 2.5), u, 0.6));
    CHECK_FALSE(strongly_positive(f, u, 0.0));
  }
  SUBCASE("dominates_vec allows the documented hybrid slack") {
    const LatticeVector big(g, v.cwiseAbs());
    CHECK(dominates_vec(big, f, 0.0));
    const LatticeVector shaved(g, (v.cwiseAbs().array() - 1e-12).matrix());
    CHECK(dominates_vec(shaved, f, 1e-10));
    CHECK_FALSE(dominates_vec(shaved, f, 1e-14));
  }
  SUBCASE("nonpositive gauge vector is rejected") {
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(8);
    bad[3] = 0.0;
    CHECK_THROWS_AS(gauge(f, LatticeVector(g, bad)), PreconditionError);
  }
  SUBCASE("grid mismatch is rejected") {
    const GridPtr g2 = GridSpec::make(0.0, 1.0, 9, NodeScheme::endpoints_included);
    CHECK_THROWS_AS(gauge(f, ones_like(g2)), PreconditionError);
  }
}

TEST_CASE("sampling and the weighted pairing") {
  const GridPtr g = GridSpec::make(0.0, 1.0, 64, NodeScheme::endpoints_included);
  SUBCASE("trapezoid rule integrates piecewise-linear node functions exactly") {
    const LatticeVector lin = sample(g, [](double x) { return 3.0 * x - 1.0; });
    CHECK(weighted_inner(ones_like(g), lin) == doctest::Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("quadratics integrate to O(h^2)") {
    const LatticeVector sq = sample(g, [](double x) { return x * x; });
    CHECK(weighted_inner(ones_like(g), sq) ==
          doctest::Approx(1.0 / 3).epsilon(1e-4));
  }
  SUBCASE("ones_like really is 1") {
    const LatticeVector u = ones_like(g);
    CHECK(u.values.minCoeff() == 1.0);
    CHECK(u.values.maxCoeff() == 1.0);
  }
}

TEST_CASE("parallel_for") {
  SUBCASE("covers every index exactly once") {
    std::vector<int> hits(101, 0);
    parallel_for(101, [&](int i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 101);
    CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
  }
  SUBCASE("matches a serial run bitwise on slot outputs") {
    std::vector<double> par(64), ser(64);
    const auto work = [](int i) { return std::sin(0.1 * i) * std::exp(-0.01 * i); };
    parallel_for(64, [&](int i) { par[i] = work(i); });
    for (int i = 0; i < 64; ++i) ser[i] = work(i);
    CHECK(par == ser);
  }
  SUBCASE("propagates worker exceptions") {
    CHECK_THROWS_AS(
        parallel_for(16, [](int i) {
          if (i == 7) throw NumericalError("boom");
        }),
        NumericalError);
  }
  SUBCASE("EVDOM_THREADS caps the pool") {
    setenv("EVDOM_THREADS", "1", 1);
    CHECK(max_threads() == 1);
    unsetenv("EVDOM_THREADS");
    CHECK(max_threads() >= 1);
  }
}

TEST_CASE("laplacian gallery: structure per boundary condition") {
  SUBCASE("dirichlet lives on the interior grid") {
    const OperatorHandle op = build_laplacian(BoundaryKind::dirichlet, 16);
    CHECK(op.grid->scheme == NodeScheme::interior_only);
    CHECK(op.weighted_symmetric);
    const double c = 1.0 / (op.grid->spacing * op.grid->spacing);
    CHECK(op.matrix(0, 0) == doctest::Approx(-2 * c));
    CHECK(op.matrix(0, 1) == doctest::Approx(c));
    CHECK(op.matrix(0, 15) == 0.0);
  }
  SUBCASE("neumann mirrors the ghost node") {
    const OperatorHandle op = build_laplacian(BoundaryKind::neumann, 16);
    CHECK(op.grid->scheme == NodeScheme::endpoints_included);
    const double c = 1.0 / (op.grid->spacing * op.grid->spacing);
    CHECK(op.matrix(0, 1) == doctest::Approx(2 * c));
    CHECK(op.matrix(15, 14) == doctest::Approx(2 * c));
    CHECK((op.matrix * Eigen::VectorXd::Ones(16)).cwiseAbs().maxCoeff() <= 1e-9 * c);
  }
  SUBCASE("antisymmetric couples opposite ends with negative sign") {
    const OperatorHandle op = build_laplacian(BoundaryKind::antisymmetric, 16);
    CHECK(op.grid->a == -1.0);
    CHECK(op.grid->b == 1.0);
    const double c = 1.0 / (op.grid->spacing * op.grid->spacing);
    CHECK(op.matrix(0, 14) == doctest::Approx(-c));
    CHECK(op.matrix(15, 1) == doctest::Approx(-c));
    CHECK_FALSE(op.weighted_symmetric);
  }
  SUBCASE("periodic couples opposite ends with positive sign") {
    LaplacianSpec spec;
    spec.bc = BoundaryKind::periodic;
    spec.n = 16;
    spec.interval = std::make_pair(-1.0, 1.0);
    const OperatorHandle op = build_laplacian(spec);
    const double c = 1.0 / (op.grid->spacing * op.grid->spacing);
    CHECK(op.matrix(0, 14) == doctest::Approx(c));
    CHECK(op.matrix(15, 1) == doctest::Approx(c));
    const OperatorHandle as = build_laplacian(BoundaryKind::antisymmetric, 16);
    // entrywise |antisymmetric| <= periodic off the diagonal, equal diagonals:
    // the periodic operator is the canonical dominating extension.
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        if (i != j) CHECK(std::abs(as.matrix(i, j)) <= op.matrix(i, j) + 1e-12);
  }
  SUBCASE("nonlocal-beta boundary rows") {
    const double beta = -0.3;
    const OperatorHandle op = build_laplacian(BoundaryKind::nonlocal_beta, 16, beta);
    CHECK(op.grid->a == 0.0);
    CHECK(op.grid->b == doctest::Approx(kPi));
    const double h = op.grid->spacing;
    const double c = 1.0 / (h * h);
    CHECK(op.matrix(0, 1) == doctest::Approx(2 * c));
    CHECK(op.matrix(15, 14) == doctest::Approx(2 * c));
    CHECK(op.matrix(15, 0) == doctest::Approx(2 * beta / h));
  }
  SUBCASE("nonlocal-symmetric boundary rows") {
    const OperatorHandle op = build_laplacian(BoundaryKind::nonlocal_symmetric, 16);
    const double h = op.grid->spacing;
    const double c = 1.0 / (h * h);
    CHECK(op.matrix(0, 1) == doctest::Approx(2 * c));
    CHECK(op.matrix(0, 0) == doctest::Approx(-2 * c - 2 / h));
    CHECK(op.matrix(0, 15) == doctest::Approx(-2 / h));
    CHECK(op.matrix(15, 0) == doctest::Approx(-2 / h));
    CHECK(op.weighted_symmetric);
  }
  SUBCASE("size and parameter validation") {
    CHECK_THROWS_AS(build_laplacian(BoundaryKind::dirichlet, 4), PreconditionError);
    CHECK_THROWS_AS(build_laplacian(BoundaryKind::nonlocal_beta, 16, 0.2), PreconditionError);
    CHECK_THROWS_AS(build_laplacian(BoundaryKind::nonlocal_beta, 16, -0.6), PreconditionError);
    LaplacianSpec bad;
    bad.bc = BoundaryKind::nonlocal_beta;
    bad.n = 16;
    bad.beta = -0.3;
    bad.interval = std::make_pair(0.0, 1.0);
    CHECK_THROWS_AS(build_laplacian(bad), PreconditionError);
  }
}

TEST_CASE("odd-order differentiation matrices") {
  const OperatorHandle op = build_odd_order(1, 32);
  SUBCASE("grid and family") {
    CHECK(op.grid->scheme == NodeScheme::periodic_left_closed);
    CHECK(op.family == "odd_order");
  }
  SUBCASE("circulant structure") {
    for (int i = 1; i < 32; ++i)
      for (int j = 0; j < 32; ++j)
        CHECK(op.matrix(i, j) == op.matrix(i - 1, (j + 31) % 32));
  }
  SUBCASE("kernel antisymmetry is bitwise") {
    CHECK(op.matrix(0, 0) == 0.0);
    CHECK(op.matrix(16, 0) == 0.0);
    for (int d = 1; d < 16; ++d) CHECK(op.matrix(d, 0) == -op.matrix(32 - d, 0));
  }
  SUBCASE("annihilates constants") {
    const double scale = op.matrix.cwiseAbs().maxCoeff();
    CHECK((op.matrix * Eigen::VectorXd::Ones(32)).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(build_odd_order(1, 31), PreconditionError);
    CHECK_THROWS_AS(build_odd_order(1, 8), PreconditionError);
    CHECK_THROWS_AS(build_odd_order(-1, 32), PreconditionError);
  }
}

TEST_CASE("rank-one example bundle") {
  const RankOneExampleBundle bundle = build_rank_one_example(32);
  const GridPtr g = bundle.B.grid;
  SUBCASE("projections: P = ones * (w o density)^T") {
    for (int j = 0; j < 32; ++j) {
      CHECK(bundle.PA.matrix(5, j) == doctest::Approx(g->weights[j]).epsilon(1e-14));
      CHECK(bundle.PB.matrix(5, j) ==
            doctest::Approx(g->weights[j] * 2 * g->nodes[j]).epsilon(1e-14));
    }
    CHECK((bundle.PA.matrix * bundle.PA.matrix - bundle.PA.matrix).cwiseAbs().maxCoeff() <=
          1e-13);
    CHECK((bundle.PB.matrix * bundle.PB.matrix - bundle.PB.matrix).cwiseAbs().maxCoeff() <=
          1e-13);
  }
  SUBCASE("A and B are the shifted projections") {
    CHECK((bundle.A.matrix - (bundle.PA.matrix - 1.5 * Eigen::MatrixXd::Identity(32, 32)))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((bundle.B.matrix - (bundle.PB.matrix - Eigen::MatrixXd::Identity(32, 32)))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  SUBCASE("densities integrate to 1") {
    CHECK(weighted_inner(bundle.phi_A, ones_like(g)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(weighted_inner(bundle.phi_B, ones_like(g)) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("minimum size") {
    CHECK_THROWS_AS(build_rank_one_example(8), PreconditionError);
  }
}

TEST_CASE("test functions and the transcendental root") {
  const GridPtr g = GridSpec::make(0.0, 1.0, 21, NodeScheme::endpoints_included);
  SUBCASE("f_n is the clipped ramp") {
    const LatticeVector f2 = test_function_fn(2, g);
    CHECK(f2.values[0] == 1.0);
    CHECK(f2.values[5] == doctest::Approx(0.5));  // x = 0.25
    CHECK(f2.values[10] == 0.0);                  // x = 0.5
    CHECK(f2.values[20] == 0.0);
    CHECK_THROWS_AS(test_function_fn(0, g), PreconditionError);
  }
  SUBCASE("mu solves mu*sin(mu*pi) = -beta") {
    for (double beta : {-0.45, -0.25, -0.05}) {
      const double mu = solve_transcendental_mu(beta);
      CHECK(mu > 0.0);
      CHECK(mu < 0.5);
      CHECK(mu * std::sin(mu * kPi) + beta == doctest::Approx(0.0).epsilon(1e-11));
    }
    CHECK(solve_transcendental_mu(-0.25) == doctest::Approx(0.305339103305).epsilon(1e-9));
    CHECK_THROWS_AS(solve_transcendental_mu(0.1), PreconditionError);
    CHECK_THROWS_AS(solve_transcendental_mu(-0.5), PreconditionError);
  }
}

TEST_CASE("handles: identity, shifting, custom wrapping") {
  const OperatorHandle neu = build_laplacian(BoundaryKind::neumann, 16);
  SUBCASE("ids are unique per build and shared by copies") {
    const OperatorHandle neu2 = build_laplacian(BoundaryKind::neumann, 16);
    CHECK(neu.id != neu2.id);
    const OperatorHandle copy = neu;  // NOLINT
    CHECK(copy.id == neu.id);
  }
  SUBCASE("shift_operator subtracts s on the diagonal") {
    const OperatorHandle shifted = shift_operator(neu, -3.0);
    CHECK((shifted.matrix - neu.matrix - 3.0 * Eigen::MatrixXd::Identity(16, 16))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(shifted.name == "neumann-shifted");
    CHECK(shifted.id != neu.id);
    CHECK(shifted.exact_spectrum.empty());
  }
  SUBCASE("make_custom_operator measures weighted symmetry") {
    const GridPtr g = neu.grid;
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(16, 16);
    for (int i = 0; i < 16; ++i) sym(i, i) = -1.0 - i;
    const OperatorHandle d = make_custom_operator("diag", g, sym);
    CHECK(d.weighted_symmetric);
    Eigen::MatrixXd asym = sym;
    asym(0, 7) = 5.0;
    CHECK_FALSE(make_custom_operator("asym", g, asym).weighted_symmetric);
    CHECK_THROWS_AS(make_custom_operator("bad", g, Eigen::MatrixXd::Zero(4, 4)),
                    PreconditionError);
  }
}
