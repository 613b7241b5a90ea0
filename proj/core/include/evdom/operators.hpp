#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evdom/grid.hpp"

namespace evdom {

enum class BoundaryKind {
  dirichlet,
  neumann,
  antisymmetric,       // f(a) = -f(b), f'(a) = -f'(b)
  periodic,            // f(a) = f(b),  f'(a) = f'(b)
  nonlocal_beta,       // f'(0) = 0, f'(pi) = beta * f(0), fixed interval (0, pi)
  nonlocal_symmetric,  // f'(0) = -f'(1) = f(0) + f(1), fixed interval (0, 1)
};

const char* to_string(BoundaryKind bc);

struct ExactEigenvalue {
  std::complex<double> value;
  std::string description;
};

/// Dense discretized operator with its grid and metadata.
///
/// Handles are immutable once built. `id` is unique per build; copies share it,
/// which lets spectral analysis results be memoized per operator.
struct OperatorHandle {
  std::string name;
  GridPtr grid;
  Eigen::MatrixXd matrix;
  /// Symmetric with respect to the weighted inner product:
  /// ||W*M - M^T*W||_max < 1e-10 * ||M||_max, W = diag(weights).
  bool weighted_symmetric = false;
  /// Known continuum/model eigenvalues, for reporting; may be empty.
  std::vector<ExactEigenvalue> exact_spectrum;
  std::string family;  // "laplacian", "odd_order", "rank_one", "custom"
  std::uint64_t id = 0;
};

struct LaplacianSpec {
  BoundaryKind bc = BoundaryKind::dirichlet;
  int n = 0;
  /// Coupling constant for nonlocal_beta; must lie in (-1/2, 0).
  double beta = 0.0;
  /// Interval override. nonlocal_beta and nonlocal_symmetric reject overrides
  /// (their boundary conditions are tied to their model intervals).
  std::optional<std::pair<double, double>> interval;
};

/// Interval each boundary condition is defined on by default.
std::pair<double, double> default_interval(BoundaryKind bc);

/// Second-order centered finite-difference Laplacian with the boundary
/// condition imposed by ghost-node elimination (neumann, nonlocal_*) or
/// boundary row coupling through the ghost extension (antisymmetric,
/// periodic). Dirichlet lives on the interior_only grid; all other kinds use
/// the endpoints_included grid so that operators on a common interval can be
/// compared entrywise on one node set.
OperatorHandle build_laplacian(const LaplacianSpec& spec);
OperatorHandle build_laplacian(BoundaryKind bc, int n, double beta = 0.0);

/// Real Fourier-spectral differentiation matrix of odd order 2k+1 on the
/// periodic_left_closed grid over (0, 1); n must be even and >= 16. The
/// Nyquist mode is assigned symbol 0.
OperatorHandle build_odd_order(int k, int n);

/// Discretization of the rank-one projection example on (0, 1):
///   P_A = 1 (x) phi_A with phi_A = integral against 1,
///   P_B = 1 (x) phi_B with phi_B = integral against 2x,
///   A = P_A - 3/2 id,  B = P_B - id.
/// Functionals are realized through the trapezoid weights, so P_A, P_B are
/// projections up to rounding.
struct RankOneExampleBundle {
  OperatorHandle A;
  OperatorHandle B;
  OperatorHandle PA;
  OperatorHandle PB;
  LatticeVector phi_A;  // density 1
  LatticeVector phi_B;  // density 2x
};
RankOneExampleBundle build_rank_one_example(int n);

/// Samples f_n(x) = max(1 - n*x, 0) on the grid. n_index >= 1.
LatticeVector test_function_fn(int n_index, const GridPtr& grid);

/// Unique root mu in (0, 1/2) of mu * sin(mu * pi) = -beta for beta in
/// (-1/2, 0), found by bisection to absolute tolerance 1e-12. The leading
/// eigenvalue of the nonlocal_beta operator is -mu^2.
double solve_transcendental_mu(double beta);

/// Wraps an externally supplied matrix as an operator handle (fresh id).
/// The weighted-symmetry flag is measured from the matrix.
OperatorHandle make_custom_operator(std::string name, GridPtr grid, Eigen::MatrixXd matrix,
                                    std::string family = "custom");

/// A - s * id, as a fresh handle named "<name>-shifted".
OperatorHandle shift_operator(const OperatorHandle& op, double s);

}  // namespace evdom
