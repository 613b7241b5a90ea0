#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>

namespace evdom {

enum class NodeScheme { endpoints_included, interior_only, periodic_left_closed };

const char* to_string(NodeScheme scheme);

/// One-dimensional quadrature grid on [a, b].
///
/// Node layout and weights per scheme:
///  - endpoints_included:   n nodes a + i*h, h = (b-a)/(n-1); trapezoid weights
///                          (h/2 at the two ends, h inside).
///  - interior_only:        n nodes a + (i+1)*h, h = (b-a)/(n+1); uniform
///                          weights (b-a)/n, so the weights sum to b-a and the
///                          weight matrix stays proportional to the identity.
///  - periodic_left_closed: n nodes a + i*h, h = (b-a)/n; uniform weights h.
///
/// Grids are immutable; share them through GridPtr.
struct GridSpec {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  NodeScheme scheme = NodeScheme::endpoints_included;
  double spacing = 0.0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  static std::shared_ptr<const GridSpec> make(double a, double b, int n, NodeScheme scheme);

  /// True when both grids describe the same node set.
  bool same_layout(const GridSpec& other) const;

  /// True when this grid is the interior-only grid matching the closed grid
  /// `outer` (same interval, same spacing, n == outer.n - 2). Used to embed
  /// Dirichlet-type operators into closed grids by zero extension.
  bool interior_of(const GridSpec& outer) const;
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// Values sampled on the nodes of a grid.
struct LatticeVector {
  GridPtr grid;
  Eigen::VectorXd values;

  LatticeVector() = default;
  LatticeVector(GridPtr g, Eigen::VectorXd v);

  int size() const { return static_cast<int>(values.size()); }
};

LatticeVector ones_like(const GridPtr& grid);
LatticeVector sample(const GridPtr& grid, const std::function<double(double)>& f);

/// Weighted pairing <phi, f> = sum_i w_i phi_i f_i.
double weighted_inner(const LatticeVector& phi, const LatticeVector& f);

}  // namespace evdom
