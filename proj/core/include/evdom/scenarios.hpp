#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evdom {

struct ScenarioCheck {
  std::string name;
  bool pass = false;
  std::string summary;
  std::string details_json;  // serialized sub-report or measurement record
};

struct ScenarioResult {
  std::string name;
  std::string config_json;  // fully resolved inputs
  std::vector<ScenarioCheck> checks;
  bool pass = false;  // conjunction of all checks
  std::vector<std::string> notes;
};

/// Scenario knobs. Zero-valued fields take per-scenario defaults; the resolved
/// values are echoed in config_json. Eigenvalue/projection checks run at
/// n_grid; semigroup sweeps run at sweep_n (capped for runtime).
struct ScenarioOptions {
  int n_grid = 0;
  int sweep_n = 0;
  int count = 0;  // samples per time/radius sweep
  std::uint64_t seed = 42;
  double eps = 1e-10;
  int quad_points = 12;
  double beta1 = -0.4;  // scenario_nonlocal_beta
  double beta2 = -0.1;
  int m = 0;  // scenario_odd_order orders (m < l)
  int l = 1;
};

/// Rank-one projection pair: closed-form semigroups/resolvents, individual
/// domination for f_1, f_2, f_4, uniform failure with explicit witness
/// directions, and the resolvent-difference sign flips.
ScenarioResult scenario_rank_one(const ScenarioOptions& opts = {});

/// Antisymmetric-BC Laplacian vs Neumann and periodic Laplacians on (-1, 1):
/// eigenvalue pairs, sign-changing spectral projection, uniform eventual
/// domination by Neumann (with rank-one lower bound), small-t failure witness,
/// and all-t domination by the periodic operator.
ScenarioResult scenario_antisym_vs_neumann(const ScenarioOptions& opts = {});

/// Two nonlocal Robin-type operators with beta1 < beta2 in (-1/2, 0):
/// transcendental leading eigenvalues, spectral-bound monotonicity, uniform
/// eventual domination, and both resolvent windows at s(B).
ScenarioResult scenario_nonlocal_beta(const ScenarioOptions& opts = {});

/// Dirichlet <= nonlocal-symmetric <= Neumann sandwich on (0, 1): spectral
/// bound ordering, entrywise eventual domination for both pairs, individual
/// domination sweeps, the four resolvent windows, and a small-t witness
/// against all-t domination of the middle operator.
ScenarioResult scenario_sandwich(const ScenarioOptions& opts = {});

/// Odd-order differentiation pair A_m, A_l (orders 2m+1, 2l+1): spectral bound
/// 0 with kernel 1, right-window maximum principle for A_m, and a converse
/// witness showing the resolvent domination cannot hold for m != l.
ScenarioResult scenario_odd_order(const ScenarioOptions& opts = {});

/// Cesaro means: 1/r convergence to the mean-ergodic projection and the
/// four-way equivalence audit on Neumann, nonlocal-symmetric (both pass) and
/// the antisymmetric operator (all four fail).
ScenarioResult scenario_cesaro(const ScenarioOptions& opts = {});

}  // namespace evdom
