#pragma once

#include "evdom/operators.hpp"

namespace evdom {

enum class EvolutionKind { semigroup, resolvent, cesaro };

struct EvolutionSample {
  double parameter = 0.0;  // t, lambda, or r
  EvolutionKind kind = EvolutionKind::semigroup;
  Eigen::MatrixXd matrix;
  std::string method;  // "pade13", "lu", "exact-identity", "quadrature"
};

/// Gauss-Legendre rule with q nodes mapped to [0, 1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussLegendre gauss_legendre(int q);

/// exp(M) by scaling and squaring with the degree-13 diagonal Pade
/// approximant. Deterministic; throws OverflowError for norms outside the
/// representable range.
Eigen::MatrixXd expm_matrix(const Eigen::MatrixXd& M);

/// exp(t * A).
EvolutionSample expm(const OperatorHandle& op, double t);

/// (lambda - A)^(-1) through a pivoted LU factorization. Requires the
/// factorization condition estimate to stay below 1e12 and lambda to keep a
/// distance > 1e-10 from every computed eigenvalue; throws
/// SingularResolventError (carrying the nearest eigenvalue) otherwise.
EvolutionSample resolvent(const OperatorHandle& op, double lambda);

/// Cesaro mean C(r) = (1/r) * integral_0^r exp(sA) ds. Uses the exact
/// identity A^(-1)(exp(rA) - I)/r when A is invertible (condition estimate
/// below 1e12); otherwise composite Gauss-Legendre quadrature of exp(sA) with
/// quad_points nodes per unit-interval panel. The method is recorded.
EvolutionSample cesaro(const OperatorHandle& op, double r, int quad_points = 12);

/// || integral_0^T exp(-lambda s) exp(sA) ds - Res(lambda, A) ||_max for
/// lambda > s(A) + 0.1. When T <= 0 it is chosen so the truncation tail bound
/// exp((s(A)-lambda) T)/(lambda - s(A)) drops below 1e-8. Each quadrature panel
/// is built by dyadic doubling from a base slice of unit matrix norm, so the
/// stiff initial layer costs only squarings, not extra quadrature nodes.
double laplace_transform_check(const OperatorHandle& op, double lambda, double T = 0.0,
                               int quad_points = 16);

/// Streaming evaluation of integral_0^r exp(sM) ds at nondecreasing r, using
/// the same composite Gauss-Legendre panels as cesaro(). Shares the panel
/// integral and the unit-step propagator across segments.
class SemigroupAverager {
 public:
  SemigroupAverager(Eigen::MatrixXd M, int quad_points);
  /// r must be >= the previous call's r. Returns integral_0^r exp(sM) ds.
  const Eigen::MatrixXd& advance_to(double r);

 private:
  void prime();

  Eigen::MatrixXd M_;
  int quad_points_;
  double r_done_ = 0.0;
  Eigen::MatrixXd S_;   // integral so far
  Eigen::MatrixXd G_;   // exp(r_done * M)
  Eigen::MatrixXd E1_;  // exp(M), cached unit-step propagator
  Eigen::MatrixXd J1_;  // integral_0^1 exp(sM) ds, cached unit panel
  bool primed_ = false;
  GaussLegendre rule_;
};

}  // namespace evdom
