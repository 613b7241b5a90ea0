#include "evdom/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "evdom/errors.hpp"
#include "evdom/spectral.hpp"

namespace evdom {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Threshold for the degree-13 diagonal Pade approximant (Higham 2005).
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// integral_0^w exp(sM) ds together with exp(wM), for 0 < w <= 1.
///
/// The panel is graded geometrically: a base slice [0, w/2^L] short enough
/// that ||slice * M|| <= 1 is integrated with the Gauss-Legendre rule, then
/// the doubling identities
///   J(2tau) = (I + exp(tau M)) J(tau),  exp(2tau M) = exp(tau M)^2
/// extend it to the full width. The doubling steps are exact in exact
/// arithmetic, so the only quadrature error lives in the well-conditioned
/// base slice.
struct PanelResult {
  Eigen::MatrixXd J;
  Eigen::MatrixXd E;
};

PanelResult panel_integral(const Eigen::MatrixXd& M, double w, const GaussLegendre& rule) {
  const double scaled = one_norm(M) * w;
  const int levels = scaled > 1.0 ? static_cast<int>(std::ceil(std::log2(scaled))) : 0;
  const double tau = w / std::pow(2.0, levels);

  const int n = static_cast<int>(M.rows());
  PanelResult out;
  out.J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < rule.nodes.size(); ++i)
    out.J += (tau * rule.weights[i]) * expm_matrix((tau * rule.nodes[i]) * M);
  out.E = expm_matrix(tau * M);
  for (int l = 0; l < levels; ++l) {
    out.J += out.E * out.J;
    out.E = (out.E * out.E).eval();
  }
  if (!out.J.allFinite() || !out.E.allFinite())
    throw OverflowError("panel integral overflowed", scaled);
  return out;
}

}  // namespace

GaussLegendre gauss_legendre(int q) {
  if (q < 2 || q > 64)
    throw PreconditionError("gauss_legendre: node count must lie in [2, 64]");
  GaussLegendre rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    // Root of the Legendre polynomial P_q on (-1, 1) by Newton iteration.
    double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[q - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[q - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Eigen::MatrixXd expm_matrix(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw PreconditionError("expm_matrix: matrix must be square");
  if (!M.allFinite()) throw PreconditionError("expm_matrix: matrix has non-finite entries");

  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};

  const double norm = one_norm(M);
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    if (squarings > 1024) throw OverflowError("expm_matrix: norm too large to scale", norm);
  }
  const Eigen::MatrixXd a = M / std::pow(2.0, squarings);

  const int n = static_cast<int>(M.rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;

  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * id);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(v - u);
  Eigen::MatrixXd f = lu.solve(v + u);
  for (int s = 0; s < squarings; ++s) {
    f = (f * f).eval();
    if (!f.allFinite())
      throw OverflowError("expm_matrix: overflow while squaring", f.cwiseAbs().maxCoeff());
  }
  return f;
}

EvolutionSample expm(const OperatorHandle& op, double t) {
  if (t < 0.0) throw PreconditionError("expm: time must be nonnegative");
  EvolutionSample sample;
  sample.parameter = t;
  sample.kind = EvolutionKind::semigroup;
  sample.matrix = expm_matrix(t * op.matrix);
  sample.method = "pade13";
  return sample;
}

EvolutionSample resolvent(const OperatorHandle& op, double lambda) {
  const auto sd = analyze(op);
  double nearest = sd->eigenvalues[0].real();
  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sd->eigenvalues.size(); ++i) {
    const double dist = std::abs(sd->eigenvalues[i] - std::complex<double>(lambda, 0.0));
    if (dist < min_dist) {
      min_dist = dist;
      nearest = sd->eigenvalues[i].real();
    }
  }
  if (min_dist <= 1e-10 * std::max(1.0, std::abs(lambda)))
    throw SingularResolventError("resolvent: lambda coincides with an eigenvalue", nearest);

  const int n = static_cast<int>(op.matrix.rows());
  Eigen::MatrixXd shifted = -op.matrix;
  shifted.diagonal().array() += lambda;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  if (lu.rcond() < 1e-12)
    throw SingularResolventError("resolvent: factorization is numerically singular", nearest);

  EvolutionSample sample;
  sample.parameter = lambda;
  sample.kind = EvolutionKind::resolvent;
  sample.matrix = lu.solve(Eigen::MatrixXd::Identity(n, n));
  sample.method = "lu";
  return sample;
}

EvolutionSample cesaro(const OperatorHandle& op, double r, int quad_points) {
  if (r <= 0.0) throw PreconditionError("cesaro: r must be positive");

  EvolutionSample sample;
  sample.parameter = r;
  sample.kind = EvolutionKind::cesaro;

  const auto sd = analyze(op);
  double min_abs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sd->eigenvalues.size(); ++i)
    min_abs = std::min(min_abs, std::abs(sd->eigenvalues[i]));
  const double scale = std::max(1.0, op.matrix.cwiseAbs().maxCoeff());

  if (min_abs > 1e-8 * scale) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(op.matrix);
    if (lu.rcond() >= 1e-12) {
      const int n = static_cast<int>(op.matrix.rows());
      const Eigen::MatrixXd num =
          expm_matrix(r * op.matrix) - Eigen::MatrixXd::Identity(n, n);
      sample.matrix = lu.solve(num) / r;
      sample.method = "exact-identity";
      return sample;
    }
  }

  SemigroupAverager averager(op.matrix, quad_points);
  sample.matrix = averager.advance_to(r) / r;
  sample.method = "quadrature";
  return sample;
}

SemigroupAverager::SemigroupAverager(Eigen::MatrixXd M, int quad_points)
    : M_(std::move(M)), quad_points_(quad_points), rule_(gauss_legendre(quad_points)) {
  if (M_.rows() != M_.cols())
    throw PreconditionError("SemigroupAverager: matrix must be square");
  const int n = static_cast<int>(M_.rows());
  S_ = Eigen::MatrixXd::Zero(n, n);
  G_ = Eigen::MatrixXd::Identity(n, n);
}

void SemigroupAverager::prime() {
  if (primed_) return;
  const PanelResult unit = panel_integral(M_, 1.0, rule_);
  J1_ = unit.J;
  E1_ = unit.E;
  primed_ = true;
}

const Eigen::MatrixXd& SemigroupAverager::advance_to(double r) {
  if (r < r_done_ - 1e-12 * std::max(1.0, r_done_))
    throw PreconditionError("SemigroupAverager: r must be nondecreasing");
  while (r - r_done_ >= 1.0) {
    prime();
    S_ += G_ * J1_;
    G_ = (G_ * E1_).eval();
    r_done_ += 1.0;
  }
  const double w = r - r_done_;
  if (w > 1e-14 * std::max(1.0, r)) {
    const PanelResult panel = panel_integral(M_, w, rule_);
    S_ += G_ * panel.J;
    G_ = (G_ * panel.E).eval();
    r_done_ = r;
  }
  return S_;
}

double laplace_transform_check(const OperatorHandle& op, double lambda, double T,
                               int quad_points) {
  const auto sd = analyze(op);
  const double margin = lambda - sd->spectral_bound;
  if (margin < 0.1)
    throw PreconditionError("laplace_transform_check: lambda must exceed s(A) + 0.1");

  if (T <= 0.0) {
    // Truncation tail: || integral_T^inf exp(s(A - lambda)) ds || is bounded
    // by exp(-margin T)/margin for the rescaled semigroup.
    T = std::log(1.0 / (1e-8 * margin)) / margin;
    T = std::clamp(T, 1.0, 1e4);
  }

  Eigen::MatrixXd damped = op.matrix;
  damped.diagonal().array() -= lambda;
  SemigroupAverager averager(damped, quad_points);
  const Eigen::MatrixXd& quad = averager.advance_to(T);
  const Eigen::MatrixXd res = resolvent(op, lambda).matrix;
  return (quad - res).cwiseAbs().maxCoeff();
}

}  // namespace evdom
