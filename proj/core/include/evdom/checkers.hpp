#pragma once

#include <optional>

#include "evdom/lattice.hpp"
#include "evdom/operators.hpp"

namespace evdom {

/// Sorted strictly increasing sampling grid for time or radius sweeps.
struct TimeGrid {
  std::vector<double> values;

  static TimeGrid logspace(double t_min, double t_max, int count);
  static TimeGrid linspace(double t_min, double t_max, int count);
  /// "log:a:b:n", "lin:a:b:n" or "list:v1,v2,...".
  static TimeGrid parse(const std::string& text);
};

enum class DominationVerdict {
  domination_for_all_sampled_t,
  eventual_domination_observed,
  no_domination_in_window,
};
const char* to_string(DominationVerdict v);

enum class WindowVerdict {
  all_sampled_pass,
  window_observed,
  no_window_observed,
};
const char* to_string(WindowVerdict v);

enum class Side { right, left };
const char* to_string(Side s);

struct MarginSample {
  double param = 0.0;
  /// Decision margin, computed on the operators rescaled by s(B).
  double margin = 0.0;
  /// Same margin mapped back to the unrescaled pair (margin * exp(t*s(B))).
  double margin_raw = 0.0;
  /// Best constant in the rank-one lower bound (uniform mode only; NaN otherwise).
  double rank_one_c = 0.0;
  bool pass = false;
};

struct Witness {
  double param = 0.0;
  int index = -1;  // node index; row*n + col for entrywise witnesses
  int row = -1;
  int col = -1;
  double lhs = 0.0;  // dominated side
  double rhs = 0.0;  // dominating side
};

/// Report of a semigroup (or Cesaro) domination sweep.
///
/// Verdict policy: domination_for_all_sampled_t when every sample passes;
/// eventual_domination_observed when the last quarter of the grid passes with
/// a monotone-nondecreasing margin over that tail; no_domination_in_window
/// otherwise. earliest_pass is the first grid point from which every later
/// sample passes, independent of the verdict.
struct DominationReport {
  std::string mode;  // "individual", "uniform_entrywise", "cesaro"
  std::string pair;  // "A=<name>, B=<name>" or the single operator name
  Eigen::VectorXd u;
  std::vector<MarginSample> samples;
  std::optional<double> earliest_pass;
  DominationVerdict verdict = DominationVerdict::no_domination_in_window;
  std::optional<Witness> witness;  // strongest violation, when any sample fails
  double rescaled_by = 0.0;
  double eps = 0.0;
};

struct WindowSample {
  double lambda = 0.0;
  double offset = 0.0;  // |lambda - lambda0|
  double margin = 0.0;
  bool pass = false;
  bool skipped = false;  // lambda fell within 1e-10 of a computed eigenvalue
};

/// Report of a resolvent-side window check near lambda0.
///
/// Offsets are geometric: 0.5 * 2^-j, j = 0..20. delta_found is the largest
/// sampled offset such that every non-skipped sample at a smaller or equal
/// offset passes. Verdict: all_sampled_pass when every non-skipped sample
/// passes; window_observed when the closest quarter of the offsets passes;
/// no_window_observed otherwise.
struct WindowReport {
  std::string mode;  // "resolvent_domination", "max_principle", "anti_max_principle"
  std::string pair;
  double lambda0 = 0.0;
  Side side = Side::right;
  std::vector<WindowSample> samples;
  double delta_found = 0.0;
  WindowVerdict verdict = WindowVerdict::no_window_observed;
  double eps = 0.0;
};

/// Individual eventual domination: margins m(t) = gauge(e^{tB}|f| - |e^{tA}f|, u).lower
/// on the rescaled pair (A - s(B), B - s(B)). A may live on B's grid or on its
/// interior-only subgrid (Dirichlet embedding by zero extension).
DominationReport check_individual_semigroup_domination(const OperatorHandle& A,
                                                       const OperatorHandle& B,
                                                       const LatticeVector& f,
                                                       const LatticeVector& u,
                                                       const TimeGrid& grid, double eps = 1e-10);

/// Uniform (entrywise) eventual domination: |e^{tA}|_ij <= e^{tB}_ij + eps on
/// the rescaled pair. When u and phi are given (default: ones), also reports
/// the best c with e^{tB} - |e^{tA}| >= c * u (w o phi)^T per sample.
DominationReport check_uniform_semigroup_domination(const OperatorHandle& A,
                                                    const OperatorHandle& B, const TimeGrid& grid,
                                                    double eps = 1e-10,
                                                    const LatticeVector* u = nullptr,
                                                    const LatticeVector* phi = nullptr);

/// Resolvent domination windows around lambda0 = s(B):
///  right: gauge(Res(l,B)|f| - |Res(l,A)f|, u).lower > eps for l = lambda0 + d
///  left:  gauge(-Res(l,B)|f| - |Res(l,A)f|, u).lower > eps for l = lambda0 - d
/// Requires lambda0 to match s(B) within 1e-6 and to keep distance > 1e-6 from
/// the spectrum of A.
WindowReport check_resolvent_domination_window(const OperatorHandle& A, const OperatorHandle& B,
                                               const LatticeVector& f, const LatticeVector& u,
                                               double lambda0, Side side, double eps = 1e-10);

/// Maximum (right) / anti-maximum (left) principle at an eigenvalue lambda0:
/// margins gauge((l - lambda0) Res(l, op) f, u).lower over geometric offsets,
/// reported per sample as the constant c(l). Requires f >= 0, f != 0 and
/// lambda0 within 1e-6 of a computed eigenvalue.
WindowReport check_max_antimax(const OperatorHandle& op, const LatticeVector& f,
                               const LatticeVector& u, double lambda0, Side side,
                               double eps = 1e-10);

struct ConverseWitness {
  int trial_index = -1;
  Eigen::VectorXd f;
  double lambda = 0.0;
  int node = -1;
  double value = 0.0;       // offending component
  std::string kind;         // "positivity" or "domination"
};

/// Searches seeded nonnegative trial vectors (convex combinations of
/// coordinate bumps) and geometric lambda samples right of lambda0 for a
/// violation of 0 <= Res(l,A)f <= Res(l,B)f. Requires lambda0 to be an
/// eigenvalue of B (within 1e-6) and A != B; lambda samples that hit the
/// spectrum of either operator are dropped. Returns nullopt when the budget is
/// exhausted (inconclusive; never a domination certificate).
std::optional<ConverseWitness> search_converse_witness(const OperatorHandle& A,
                                                       const OperatorHandle& B, double lambda0,
                                                       int trial_count = 200,
                                                       std::uint64_t seed = 42);

/// Cesaro eventual strong positivity of op (rescaled to spectral bound 0):
/// margins gauge(C(r) f, u).lower over the radius grid. Throws NonErgodicError
/// when the rescaled operator fails the mean-ergodic spectrum test.
DominationReport check_cesaro_eventual_positivity(const OperatorHandle& op,
                                                  const LatticeVector& f, const LatticeVector& u,
                                                  const TimeGrid& r_grid, double eps = 1e-10,
                                                  int quad_points = 12);

/// Four-way equivalence audit over a trial set: (1) Cesaro eventual strong
/// positivity for every trial, (2) strong positivity of the mean-ergodic
/// projection applied to every trial, (3) right-window maximum principle,
/// (4) left-window anti-maximum principle, all at lambda0 = s(op) with the
/// same gauge u.
struct EquivalenceAudit {
  std::string op_name;
  std::vector<std::array<bool, 4>> per_trial;
  std::array<bool, 4> aggregate{};
  /// Pairwise agreement of the four aggregate verdicts.
  bool agree = false;
  /// Number of trials whose four verdicts agree pairwise.
  int trials_agreeing = 0;
};
EquivalenceAudit run_equivalence_audit(const OperatorHandle& op,
                                       const std::vector<LatticeVector>& trials,
                                       const LatticeVector& u, const TimeGrid& r_grid,
                                       double eps = 1e-10, int quad_points = 12);

/// Deterministic nonnegative, nonzero trial vectors (coordinate blocks,
/// smooth bumps, convex bump combinations), max-norm 1.
std::vector<LatticeVector> make_trial_set(const GridPtr& grid, int count, std::uint64_t seed);

}  // namespace evdom
