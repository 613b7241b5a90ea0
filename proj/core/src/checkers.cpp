#include "evdom/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "evdom/errors.hpp"
#include "evdom/evolution.hpp"
#include "evdom/parallel.hpp"
#include "evdom/spectral.hpp"

namespace evdom {

namespace {

constexpr int kWindowOffsets = 21;  // 0.5 * 2^-j, j = 0..20

double window_offset(int j) { return 0.5 * std::ldexp(1.0, -j); }

struct PairLayout {
  bool embedded = false;  // A lives on the interior-only subgrid of B's grid
  int inner_offset = 0;
  int inner_count = 0;
};

PairLayout resolve_pair(const OperatorHandle& A, const OperatorHandle& B) {
  PairLayout layout;
  if (A.grid->same_layout(*B.grid)) return layout;
  if (A.grid->interior_of(*B.grid)) {
    layout.embedded = true;
    layout.inner_offset = 1;
    layout.inner_count = A.grid->n;
    return layout;
  }
  throw PreconditionError(
      "operator grids are incompatible: need the same layout or an interior-only subgrid");
}

void require_on_grid(const LatticeVector& v, const GridPtr& grid, const char* what) {
  if (!v.grid || !v.grid->same_layout(*grid))
    throw PreconditionError(std::string(what) + " must live on the comparison grid");
}

std::string pair_label(const OperatorHandle& A, const OperatorHandle& B) {
  return "A=" + A.name + ", B=" + B.name;
}

/// Zero-extends an interior-grid vector to the closed grid.
Eigen::VectorXd extend_by_zero(const Eigen::VectorXd& inner, const PairLayout& layout, int n_full) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_full);
  full.segment(layout.inner_offset, layout.inner_count) = inner;
  return full;
}

double distance_to_spectrum(const std::shared_ptr<const SpectralData>& sd, double lambda) {
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sd->eigenvalues.size(); ++i)
    dist = std::min(dist, std::abs(sd->eigenvalues[i] - std::complex<double>(lambda, 0.0)));
  return dist;
}

/// Shared verdict/earliest-pass/witness policy for parameter sweeps.
void finalize_domination(DominationReport& rep, const std::vector<Witness>& candidates) {
  const int count = static_cast<int>(rep.samples.size());
  rep.earliest_pass.reset();
  rep.witness.reset();
  if (count == 0) {
    rep.verdict = DominationVerdict::no_domination_in_window;
    return;
  }

  int suffix_start = count;
  while (suffix_start > 0 && rep.samples[suffix_start - 1].pass) --suffix_start;
  if (suffix_start < count) rep.earliest_pass = rep.samples[suffix_start].param;

  if (suffix_start == 0) {
    rep.verdict = DominationVerdict::domination_for_all_sampled_t;
  } else {
    const int tail = (count + 3) / 4;
    bool tail_ok = suffix_start <= count - tail;
    for (int i = count - tail; tail_ok && i + 1 < count; ++i) {
      const double slack = 1e-9 * std::max(1.0, std::abs(rep.samples[i].margin));
      if (rep.samples[i + 1].margin < rep.samples[i].margin - slack) tail_ok = false;
    }
    rep.verdict = tail_ok ? DominationVerdict::eventual_domination_observed
                          : DominationVerdict::no_domination_in_window;
  }

  int worst = -1;
  for (int i = 0; i < count; ++i) {
    if (rep.samples[i].pass) continue;
    if (worst < 0 || rep.samples[i].margin < rep.samples[worst].margin) worst = i;
  }
  if (worst >= 0) rep.witness = candidates[worst];
}

/// Shared window bookkeeping: delta_found and the verdict.
void finalize_window(WindowReport& rep) {
  const int count = static_cast<int>(rep.samples.size());
  rep.delta_found = 0.0;
  for (int j = 0; j < count; ++j) {
    bool all_pass = true;
    bool any = false;
    for (int k = j; k < count; ++k) {
      if (rep.samples[k].skipped) continue;
      any = true;
      if (!rep.samples[k].pass) {
        all_pass = false;
        break;
      }
    }
    if (any && all_pass) {
      rep.delta_found = rep.samples[j].offset;
      break;
    }
  }

  bool any = false, all_pass = true;
  for (const auto& s : rep.samples) {
    if (s.skipped) continue;
    any = true;
    if (!s.pass) all_pass = false;
  }
  if (any && all_pass) {
    rep.verdict = WindowVerdict::all_sampled_pass;
    return;
  }
  const int quarter = (count + 3) / 4;
  bool tail_any = false, tail_pass = true;
  for (int k = count - quarter; k < count; ++k) {
    if (rep.samples[k].skipped) continue;
    tail_any = true;
    if (!rep.samples[k].pass) tail_pass = false;
  }
  rep.verdict = (tail_any && tail_pass) ? WindowVerdict::window_observed
                                        : WindowVerdict::no_window_observed;
}

}  // namespace

TimeGrid TimeGrid::logspace(double t_min, double t_max, int count) {
  if (count < 1) throw PreconditionError("TimeGrid: count must be >= 1");
  if (t_min <= 0.0) throw PreconditionError("TimeGrid::logspace: t_min must be positive");
  TimeGrid grid;
  if (count == 1) {
    grid.values = {t_min};
    return grid;
  }
  if (t_max <= t_min) throw PreconditionError("TimeGrid: t_max must exceed t_min");
  grid.values.resize(count);
  const double la = std::log(t_min), lb = std::log(t_max);
  for (int i = 0; i < count; ++i)
    grid.values[i] = std::exp(la + (lb - la) * i / (count - 1));
  grid.values.front() = t_min;
  grid.values.back() = t_max;
  return grid;
}

TimeGrid TimeGrid::linspace(double t_min, double t_max, int count) {
  if (count < 1) throw PreconditionError("TimeGrid: count must be >= 1");
  TimeGrid grid;
  if (count == 1) {
    grid.values = {t_min};
    return grid;
  }
  if (t_max <= t_min) throw PreconditionError("TimeGrid: t_max must exceed t_min");
  grid.values.resize(count);
  for (int i = 0; i < count; ++i)
    grid.values[i] = t_min + (t_max - t_min) * i / (count - 1);
  grid.values.front() = t_min;
  grid.values.back() = t_max;
  return grid;
}

TimeGrid TimeGrid::parse(const std::string& text) {
  const auto bad = [&] {
    return PreconditionError("TimeGrid::parse: expected log:a:b:n, lin:a:b:n or list:v1,v2,... "
                             "but got '" + text + "'");
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw bad();
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  if (head == "list") {
    TimeGrid grid;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw bad();
      size_t used = 0;
      grid.values.push_back(std::stod(item, &used));
      if (used != item.size()) throw bad();
    }
    if (grid.values.empty()) throw bad();
    std::sort(grid.values.begin(), grid.values.end());
    for (size_t i = 0; i + 1 < grid.values.size(); ++i)
      if (grid.values[i] == grid.values[i + 1])
        throw PreconditionError("TimeGrid::parse: duplicate values in list");
    return grid;
  }

  double a = 0.0, b = 0.0;
  int n = 0;
  std::stringstream ss(rest);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw bad();
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw bad();
  }
  if (head == "log") return logspace(a, b, n);
  if (head == "lin") return linspace(a, b, n);
  throw bad();
}

const char* to_string(DominationVerdict v) {
  switch (v) {
    case DominationVerdict::domination_for_all_sampled_t:
      return "domination_for_all_sampled_t";
    case DominationVerdict::eventual_domination_observed:
      return "eventual_domination_observed";
    case DominationVerdict::no_domination_in_window:
      return "no_domination_in_window";
  }
  return "?";
}

const char* to_string(WindowVerdict v) {
  switch (v) {
    case WindowVerdict::all_sampled_pass:
      return "all_sampled_pass";
    case WindowVerdict::window_observed:
      return "window_observed";
    case WindowVerdict::no_window_observed:
      return "no_window_observed";
  }
  return "?";
}

const char* to_string(Side s) { return s == Side::right ? "right" : "left"; }

DominationReport check_individual_semigroup_domination(const OperatorHandle& A,
                                                       const OperatorHandle& B,
                                                       const LatticeVector& f,
                                                       const LatticeVector& u,
                                                       const TimeGrid& grid, double eps) {
  const PairLayout layout = resolve_pair(A, B);
  require_on_grid(f, B.grid, "f");
  require_on_grid(u, B.grid, "u");
  if (grid.values.empty()) throw PreconditionError("time grid is empty");
  for (double t : grid.values)
    if (t < 0.0) throw PreconditionError("time grid must be nonnegative");

  const double sB = analyze(B)->spectral_bound;
  Eigen::MatrixXd Ar = A.matrix;
  Ar.diagonal().array() -= sB;
  Eigen::MatrixXd Br = B.matrix;
  Br.diagonal().array() -= sB;

  const int nB = static_cast<int>(B.matrix.rows());
  const Eigen::VectorXd f_abs = f.values.cwiseAbs();
  const int count = static_cast<int>(grid.values.size());

  DominationReport rep;
  rep.mode = "individual";
  rep.pair = pair_label(A, B);
  rep.u = u.values;
  rep.rescaled_by = sB;
  rep.eps = eps;
  rep.samples.resize(count);
  std::vector<Witness> candidates(count);

  parallel_for(count, [&](int i) {
    const double t = grid.values[i];
    const Eigen::VectorXd dominating = expm_matrix(t * Br) * f_abs;
    Eigen::VectorXd dominated;
    if (layout.embedded) {
      const Eigen::VectorXd inner =
          f.values.segment(layout.inner_offset, layout.inner_count);
      dominated = extend_by_zero((expm_matrix(t * Ar) * inner).cwiseAbs(), layout, nB);
    } else {
      dominated = (expm_matrix(t * Ar) * f.values).cwiseAbs();
    }
    const GaugeResult g = gauge(LatticeVector(B.grid, dominating - dominated), u);

    MarginSample& s = rep.samples[i];
    s.param = t;
    s.margin = g.lower;
    s.margin_raw = g.lower * std::exp(t * sB);
    s.rank_one_c = std::numeric_limits<double>::quiet_NaN();
    s.pass = g.lower >= -eps;

    Witness& w = candidates[i];
    w.param = t;
    w.index = g.argmin_index;
    w.lhs = dominated[g.argmin_index];
    w.rhs = dominating[g.argmin_index];
  });

  finalize_domination(rep, candidates);
  return rep;
}

DominationReport check_uniform_semigroup_domination(const OperatorHandle& A,
                                                    const OperatorHandle& B, const TimeGrid& grid,
                                                    double eps, const LatticeVector* u,
                                                    const LatticeVector* phi) {
  const PairLayout layout = resolve_pair(A, B);
  if (grid.values.empty()) throw PreconditionError("time grid is empty");
  for (double t : grid.values)
    if (t < 0.0) throw PreconditionError("time grid must be nonnegative");

  const int nB = static_cast<int>(B.matrix.rows());
  const LatticeVector ones = ones_like(B.grid);
  const Eigen::VectorXd& u_vec = u ? u->values : ones.values;
  const Eigen::VectorXd& phi_vec = phi ? phi->values : ones.values;
  if (u) require_on_grid(*u, B.grid, "u");
  if (phi) require_on_grid(*phi, B.grid, "phi");
  if (u_vec.minCoeff() <= 0.0 || phi_vec.minCoeff() <= 0.0)
    throw PreconditionError("u and phi must be strictly positive");

  const double sB = analyze(B)->spectral_bound;
  Eigen::MatrixXd Ar = A.matrix;
  Ar.diagonal().array() -= sB;
  Eigen::MatrixXd Br = B.matrix;
  Br.diagonal().array() -= sB;

  const int count = static_cast<int>(grid.values.size());
  DominationReport rep;
  rep.mode = "uniform_entrywise";
  rep.pair = pair_label(A, B);
  rep.u = u_vec;
  rep.rescaled_by = sB;
  rep.eps = eps;
  rep.samples.resize(count);
  std::vector<Witness> candidates(count);

  parallel_for(count, [&](int i) {
    const double t = grid.values[i];
    const Eigen::MatrixXd dominating = expm_matrix(t * Br);
    Eigen::MatrixXd dominated_abs;
    if (layout.embedded) {
      dominated_abs = Eigen::MatrixXd::Zero(nB, nB);
      dominated_abs.block(layout.inner_offset, layout.inner_offset, layout.inner_count,
                          layout.inner_count) = expm_matrix(t * Ar).cwiseAbs();
    } else {
      dominated_abs = expm_matrix(t * Ar).cwiseAbs();
    }
    const Eigen::MatrixXd diff = dominating - dominated_abs;

    int row = 0, col = 0;
    const double margin = diff.minCoeff(&row, &col);
    double c_best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < nB; ++r)
      for (int c = 0; c < nB; ++c)
        c_best = std::min(c_best, diff(r, c) / (u_vec[r] * phi_vec[c]));

    MarginSample& s = rep.samples[i];
    s.param = t;
    s.margin = margin;
    s.margin_raw = margin * std::exp(t * sB);
    s.rank_one_c = c_best;
    s.pass = margin >= -eps;

    Witness& w = candidates[i];
    w.param = t;
    w.row = row;
    w.col = col;
    w.index = row * nB + col;
    w.lhs = dominated_abs(row, col);
    w.rhs = dominating(row, col);
  });

  finalize_domination(rep, candidates);
  return rep;
}

WindowReport check_resolvent_domination_window(const OperatorHandle& A, const OperatorHandle& B,
                                               const LatticeVector& f, const LatticeVector& u,
                                               double lambda0, Side side, double eps) {
  const PairLayout layout = resolve_pair(A, B);
  require_on_grid(f, B.grid, "f");
  require_on_grid(u, B.grid, "u");

  const auto sdA = analyze(A);
  const auto sdB = analyze(B);
  const double scale0 = std::max(1.0, std::abs(lambda0));
  if (std::abs(lambda0 - sdB->spectral_bound) > 1e-6 * scale0)
    throw PreconditionError("lambda0 must match the spectral bound of B");
  if (distance_to_spectrum(sdA, lambda0) <= 1e-6 * scale0)
    throw PreconditionError("lambda0 must keep distance from the spectrum of A");

  const int nB = static_cast<int>(B.matrix.rows());
  const Eigen::VectorXd f_abs = f.values.cwiseAbs();

  WindowReport rep;
  rep.mode = "resolvent_domination";
  rep.pair = pair_label(A, B);
  rep.lambda0 = lambda0;
  rep.side = side;
  rep.eps = eps;
  rep.samples.resize(kWindowOffsets);

  for (int j = 0; j < kWindowOffsets; ++j) {
    WindowSample& s = rep.samples[j];
    s.offset = window_offset(j);
    s.lambda = side == Side::right ? lambda0 + s.offset : lambda0 - s.offset;

    const double near = 1e-10 * std::max(1.0, std::abs(s.lambda));
    if (distance_to_spectrum(sdA, s.lambda) <= near ||
        distance_to_spectrum(sdB, s.lambda) <= near) {
      s.skipped = true;
      continue;
    }

    Eigen::VectorXd dominating, dominated;
    try {
      const Eigen::MatrixXd RB = resolvent(B, s.lambda).matrix;
      dominating = side == Side::right ? Eigen::VectorXd(RB * f_abs)
                                       : Eigen::VectorXd(-(RB * f_abs));
      // For an interior-only A the resolvent is taken in the Laplace-transform
      // sense of the zero-extended semigroup: extend(Res(lambda, A) restrict(f)).
      if (layout.embedded) {
        const Eigen::VectorXd inner =
            f.values.segment(layout.inner_offset, layout.inner_count);
        dominated =
            extend_by_zero((resolvent(A, s.lambda).matrix * inner).cwiseAbs(), layout, nB);
      } else {
        dominated = (resolvent(A, s.lambda).matrix * f.values).cwiseAbs();
      }
    } catch (const SingularResolventError&) {
      s.skipped = true;
      continue;
    }

    const GaugeResult g = gauge(LatticeVector(B.grid, dominating - dominated), u);
    s.margin = g.lower;
    s.pass = g.lower > eps;
  }

  finalize_window(rep);
  return rep;
}

WindowReport check_max_antimax(const OperatorHandle& op, const LatticeVector& f,
                               const LatticeVector& u, double lambda0, Side side, double eps) {
  require_on_grid(f, op.grid, "f");
  require_on_grid(u, op.grid, "u");
  if (f.values.minCoeff() < -1e-14 * std::max(1.0, f.values.cwiseAbs().maxCoeff()))
    throw PreconditionError("f must be nonnegative");
  if (f.values.cwiseAbs().maxCoeff() == 0.0) throw PreconditionError("f must be nonzero");

  const auto sd = analyze(op);
  const double scale0 = std::max(1.0, std::abs(lambda0));
  if (distance_to_spectrum(sd, lambda0) > 1e-6 * scale0)
    throw PreconditionError("lambda0 must be close to a computed eigenvalue");

  WindowReport rep;
  rep.mode = side == Side::right ? "max_principle" : "anti_max_principle";
  rep.pair = op.name;
  rep.lambda0 = lambda0;
  rep.side = side;
  rep.eps = eps;
  rep.samples.resize(kWindowOffsets);

  for (int j = 0; j < kWindowOffsets; ++j) {
    WindowSample& s = rep.samples[j];
    s.offset = window_offset(j);
    s.lambda = side == Side::right ? lambda0 + s.offset : lambda0 - s.offset;

    if (distance_to_spectrum(sd, s.lambda) <= 1e-10 * std::max(1.0, std::abs(s.lambda))) {
      s.skipped = true;
      continue;
    }
    Eigen::VectorXd scaled;
    try {
      scaled = (s.lambda - lambda0) * (resolvent(op, s.lambda).matrix * f.values);
    } catch (const SingularResolventError&) {
      s.skipped = true;
      continue;
    }
    const GaugeResult g = gauge(LatticeVector(op.grid, scaled), u);
    s.margin = g.lower;
    s.pass = g.lower > eps;
  }

  finalize_window(rep);
  return rep;
}

std::optional<ConverseWitness> search_converse_witness(const OperatorHandle& A,
                                                       const OperatorHandle& B, double lambda0,
                                                       int trial_count, std::uint64_t seed) {
  if (!A.grid->same_layout(*B.grid))
    throw PreconditionError("witness search requires operators on the same grid");
  if (trial_count < 1) throw PreconditionError("trial_count must be >= 1");

  const auto sdA = analyze(A);
  const auto sdB = analyze(B);
  const double scale0 = std::max(1.0, std::abs(lambda0));
  if (distance_to_spectrum(sdB, lambda0) > 1e-6 * scale0)
    throw PreconditionError("lambda0 must be an eigenvalue of the dominating operator");
  const double diff_norm = (A.matrix - B.matrix).cwiseAbs().maxCoeff();
  if (diff_norm <= 1e-14 * std::max(1.0, B.matrix.cwiseAbs().maxCoeff()))
    throw PreconditionError("operators coincide; a witness cannot exist");

  const int n = static_cast<int>(A.matrix.rows());

  struct LambdaSlot {
    double lambda;
    Eigen::MatrixXd RA, RB;
  };
  std::vector<LambdaSlot> slots;
  for (int j = 0; j < kWindowOffsets; ++j) {
    const double lambda = lambda0 + window_offset(j);
    const double near = 1e-10 * std::max(1.0, std::abs(lambda));
    if (distance_to_spectrum(sdA, lambda) <= near || distance_to_spectrum(sdB, lambda) <= near)
      continue;
    try {
      slots.push_back({lambda, resolvent(A, lambda).matrix, resolvent(B, lambda).matrix});
    } catch (const SingularResolventError&) {
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_node(0, n - 1);
  std::uniform_real_distribution<double> pick_weight(0.1, 1.0);

  const int deterministic = trial_count / 2;
  for (int trial = 0; trial < trial_count; ++trial) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    if (trial < deterministic) {
      f[static_cast<int>((static_cast<long long>(trial) * n) / std::max(1, deterministic)) % n] =
          1.0;
    } else {
      const int bumps = 2 + static_cast<int>(rng() % 3);
      for (int k = 0; k < bumps; ++k) f[pick_node(rng)] += pick_weight(rng);
      f /= f.maxCoeff();
    }

    for (const LambdaSlot& slot : slots) {
      const Eigen::VectorXd ra = slot.RA * f;
      const Eigen::VectorXd rb = slot.RB * f;
      const double tol = 1e-10 * std::max(1.0, rb.cwiseAbs().maxCoeff());
      for (int i = 0; i < n; ++i) {
        if (ra[i] < -tol) {
          ConverseWitness w;
          w.trial_index = trial;
          w.f = f;
          w.lambda = slot.lambda;
          w.node = i;
          w.value = ra[i];
          w.kind = "positivity";
          return w;
        }
        if (ra[i] - rb[i] > tol) {
          ConverseWitness w;
          w.trial_index = trial;
          w.f = f;
          w.lambda = slot.lambda;
          w.node = i;
          w.value = ra[i] - rb[i];
          w.kind = "domination";
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

DominationReport check_cesaro_eventual_positivity(const OperatorHandle& op,
                                                  const LatticeVector& f, const LatticeVector& u,
                                                  const TimeGrid& r_grid, double eps,
                                                  int quad_points) {
  require_on_grid(f, op.grid, "f");
  require_on_grid(u, op.grid, "u");
  if (r_grid.values.empty()) throw PreconditionError("radius grid is empty");
  for (double r : r_grid.values)
    if (r <= 0.0) throw PreconditionError("radius grid must be positive");

  const double sA = analyze(op)->spectral_bound;
  const OperatorHandle shifted = shift_operator(op, sA);
  mean_ergodic_projection(shifted);  // validates the spectrum; throws NonErgodicError

  const int count = static_cast<int>(r_grid.values.size());
  DominationReport rep;
  rep.mode = "cesaro";
  rep.pair = op.name;
  rep.u = u.values;
  rep.rescaled_by = sA;
  rep.eps = eps;
  rep.samples.resize(count);
  std::vector<Witness> candidates(count);

  SemigroupAverager averager(shifted.matrix, quad_points);
  for (int i = 0; i < count; ++i) {
    const double r = r_grid.values[i];
    const Eigen::VectorXd mean = (averager.advance_to(r) * f.values) / r;
    const GaugeResult g = gauge(LatticeVector(op.grid, mean), u);

    MarginSample& s = rep.samples[i];
    s.param = r;
    s.margin = g.lower;
    s.margin_raw = g.lower;
    s.rank_one_c = std::numeric_limits<double>::quiet_NaN();
    s.pass = g.lower > eps;

    Witness& w = candidates[i];
    w.param = r;
    w.index = g.argmin_index;
    w.lhs = 0.0;
    w.rhs = mean[g.argmin_index];
  }

  finalize_domination(rep, candidates);
  return rep;
}

EquivalenceAudit run_equivalence_audit(const OperatorHandle& op,
                                       const std::vector<LatticeVector>& trials,
                                       const LatticeVector& u, const TimeGrid& r_grid,
                                       double eps, int quad_points) {
  if (trials.empty()) throw PreconditionError("equivalence audit needs at least one trial");
  require_on_grid(u, op.grid, "u");
  for (const auto& f : trials) require_on_grid(f, op.grid, "trial");
  if (r_grid.values.empty()) throw PreconditionError("radius grid is empty");

  const auto sd = analyze(op);
  const double sA = sd->spectral_bound;
  const OperatorHandle shifted = shift_operator(op, sA);
  const ProjectionData proj = mean_ergodic_projection(shifted);

  // Shared Cesaro panels across all trials.
  const int r_count = static_cast<int>(r_grid.values.size());
  std::vector<Eigen::MatrixXd> means;
  means.reserve(r_count);
  {
    SemigroupAverager averager(shifted.matrix, quad_points);
    for (double r : r_grid.values) means.push_back(averager.advance_to(r) / r);
  }

  // Shared resolvents across all trials, right and left of lambda0 = s(op).
  struct WindowSlot {
    double lambda;
    Eigen::MatrixXd R;
  };
  const auto collect = [&](Side side) {
    std::vector<WindowSlot> slots;
    for (int j = 0; j < kWindowOffsets; ++j) {
      const double lambda =
          side == Side::right ? sA + window_offset(j) : sA - window_offset(j);
      if (distance_to_spectrum(sd, lambda) <= 1e-10 * std::max(1.0, std::abs(lambda))) continue;
      try {
        slots.push_back({lambda, resolvent(op, lambda).matrix});
      } catch (const SingularResolventError&) {
      }
    }
    return slots;
  };
  const std::vector<WindowSlot> right_slots = collect(Side::right);
  const std::vector<WindowSlot> left_slots = collect(Side::left);
  if (right_slots.empty() || left_slots.empty())
    throw NumericalError("equivalence audit: no usable resolvent samples near lambda0");

  const auto window_holds = [&](const std::vector<WindowSlot>& slots,
                                const Eigen::VectorXd& f) {
    // All sampled offsets must pass, or at least the closest quarter.
    int total = static_cast<int>(slots.size());
    int first_fail = -1;
    for (int k = 0; k < total; ++k) {
      const Eigen::VectorXd scaled = (slots[k].lambda - sA) * (slots[k].R * f);
      if (gauge(LatticeVector(op.grid, scaled), u).lower <= eps) {
        first_fail = k;
        break;
      }
    }
    if (first_fail < 0) return true;
    const int quarter = (total + 3) / 4;
    for (int k = total - quarter; k < total; ++k) {
      const Eigen::VectorXd scaled = (slots[k].lambda - sA) * (slots[k].R * f);
      if (gauge(LatticeVector(op.grid, scaled), u).lower <= eps) return false;
    }
    return true;
  };

  EquivalenceAudit audit;
  audit.op_name = op.name;
  audit.per_trial.resize(trials.size());

  const int trial_count = static_cast<int>(trials.size());
  parallel_for(trial_count, [&](int ti) {
    const Eigen::VectorXd& f = trials[ti].values;

    bool cesaro_ok;
    {
      int suffix_start = r_count;
      std::vector<double> margins(r_count);
      for (int i = 0; i < r_count; ++i)
        margins[i] = gauge(LatticeVector(op.grid, means[i] * f), u).lower;
      while (suffix_start > 0 && margins[suffix_start - 1] > eps) --suffix_start;
      const int tail = (r_count + 3) / 4;
      cesaro_ok = suffix_start <= r_count - tail;
    }

    const bool projection_ok =
        strongly_positive(LatticeVector(op.grid, proj.P * f), u, eps);
    const bool max_ok = window_holds(right_slots, f);
    const bool antimax_ok = window_holds(left_slots, f);
    audit.per_trial[ti] = {cesaro_ok, projection_ok, max_ok, antimax_ok};
  });

  for (int k = 0; k < 4; ++k) {
    bool all = true;
    for (const auto& row : audit.per_trial) all = all && row[k];
    audit.aggregate[k] = all;
  }
  audit.agree = audit.aggregate[0] == audit.aggregate[1] &&
                audit.aggregate[1] == audit.aggregate[2] &&
                audit.aggregate[2] == audit.aggregate[3];
  audit.trials_agreeing = 0;
  for (const auto& row : audit.per_trial) {
    if (row[0] == row[1] && row[1] == row[2] && row[2] == row[3]) ++audit.trials_agreeing;
  }
  return audit;
}

std::vector<LatticeVector> make_trial_set(const GridPtr& grid, int count, std::uint64_t seed) {
  if (count < 1) throw PreconditionError("make_trial_set: count must be >= 1");
  const int n = static_cast<int>(grid->nodes.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_node(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto bump = [&](double center, double width) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      const double z = (grid->nodes[i] - center) / width;
      v[i] = std::exp(-z * z);
    }
    return v;
  };

  std::vector<LatticeVector> trials;
  trials.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    Eigen::VectorXd v;
    if (idx == 0) {
      v = Eigen::VectorXd::Ones(n);
    } else if (idx % 4 == 1) {
      // Indicator block.
      v = Eigen::VectorXd::Zero(n);
      const int start = pick_node(rng);
      const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, n / 8)));
      for (int i = start; i < std::min(n, start + len); ++i) v[i] = 1.0;
    } else if (idx % 4 == 2) {
      const double center = grid->a + (grid->b - grid->a) * unit(rng);
      const double width = (grid->b - grid->a) * (0.02 + 0.2 * unit(rng));
      v = bump(center, width);
    } else if (idx % 4 == 3) {
      const double c1 = grid->a + (grid->b - grid->a) * unit(rng);
      const double c2 = grid->a + (grid->b - grid->a) * unit(rng);
      const double w1 = (grid->b - grid->a) * (0.02 + 0.1 * unit(rng));
      const double w2 = (grid->b - grid->a) * (0.02 + 0.1 * unit(rng));
      const double alpha = unit(rng);
      v = alpha * bump(c1, w1) + (1.0 - alpha) * bump(c2, w2);
    } else {
      v = Eigen::VectorXd::Zero(n);
      v[pick_node(rng)] = 1.0;
    }
    v /= v.maxCoeff();
    trials.emplace_back(grid, std::move(v));
  }
  return trials;
}

}  // namespace evdom
