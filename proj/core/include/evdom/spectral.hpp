#pragma once

#include <memory>

#include "evdom/operators.hpp"

namespace evdom {

/// Full spectral decomposition of an operator.
struct SpectralData {
  /// Sorted by real part descending, ties by imaginary part ascending.
  Eigen::VectorXcd eigenvalues;
  /// Columns follow the eigenvalue order.
  Eigen::MatrixXcd right_eigenvectors;
  double spectral_bound = 0.0;
  /// True iff the spectral bound is attained by exactly one eigenvalue and its
  /// real part exceeds every other real part by `gap`.
  bool dominant = false;
  double gap = 0.0;
};

/// Dense eigendecomposition, memoized per operator id; safe for concurrent
/// readers. Weighted-symmetric operators go through a symmetric solver after
/// diagonal similarity with W^(1/2).
std::shared_ptr<const SpectralData> analyze(const OperatorHandle& op);

/// Spectral projection data for the eigenvalue cluster at lambda0.
struct ProjectionData {
  double lambda0 = 0.0;
  Eigen::MatrixXd P;
  int algebraic_multiplicity = 0;
  /// 1 when the cluster is semisimple; otherwise the nilpotency index of
  /// (A - lambda0) P estimated from powers of the nilpotent part.
  int pole_order_estimate = 0;
  /// Numerical rank of P.
  int rank = 0;
};

/// Default clustering tolerance: 1e-6 * max(1, ||A||_max).
double default_cluster_tol(const OperatorHandle& op);

/// Projection onto the cluster of eigenvalues within cluster_tol of lambda0.
/// P = V_c W_c^H with the left block taken from the inverse of the eigenvector
/// matrix, so the biorthogonal normalization W_c^H V_c = I holds by
/// construction and P is idempotent on the computed basis. Falls back to a
/// resolvent contour integral when the eigenvector matrix is numerically
/// singular (defective cluster).
///
/// Throws AmbiguousClusterError when another eigenvalue lies within
/// 2*cluster_tol of lambda0 without being in the cluster, and
/// PreconditionError when no eigenvalue is within cluster_tol.
ProjectionData spectral_projection(const OperatorHandle& op, double lambda0, double cluster_tol);
ProjectionData spectral_projection(const OperatorHandle& op, double lambda0);

/// Projection at 0 for an operator with spectral bound 0 (within 1e-8 after
/// max(1,|s|) scaling; rescale first otherwise). Throws NonErgodicError when
/// the 0-cluster is defective or other eigenvalues lie on the imaginary axis.
ProjectionData mean_ergodic_projection(const OperatorHandle& op);

}  // namespace evdom
