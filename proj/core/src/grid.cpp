#include "evdom/grid.hpp"

#include <cmath>

#include "evdom/errors.hpp"

namespace evdom {

const char* to_string(NodeScheme scheme) {
  switch (scheme) {
    case NodeScheme::endpoints_included: return "endpoints_included";
    case NodeScheme::interior_only: return "interior_only";
    case NodeScheme::periodic_left_closed: return "periodic_left_closed";
  }
  return "?";
}

std::shared_ptr<const GridSpec> GridSpec::make(double a, double b, int n, NodeScheme scheme) {
  if (!(b > a)) throw PreconditionError("GridSpec: requires b > a");
  int min_n = scheme == NodeScheme::endpoints_included ? 2 : 1;
  if (n < min_n) throw PreconditionError("GridSpec: too few nodes");

  auto g = std::make_shared<GridSpec>();
  g->a = a;
  g->b = b;
  g->n = n;
  g->scheme = scheme;
  g->nodes.resize(n);
  g->weights.resize(n);

  const double len = b - a;
  switch (scheme) {
    case NodeScheme::endpoints_included: {
      const double h = len / (n - 1);
      g->spacing = h;
      for (int i = 0; i < n; ++i) g->nodes[i] = a + i * h;
      g->weights.setConstant(h);
      g->weights[0] = h / 2;
      g->weights[n - 1] = h / 2;
      break;
    }
    case NodeScheme::interior_only: {
      const double h = len / (n + 1);
      g->spacing = h;
      for (int i = 0; i < n; ++i) g->nodes[i] = a + (i + 1) * h;
      g->weights.setConstant(len / n);
      break;
    }
    case NodeScheme::periodic_left_closed: {
      const double h = len / n;
      g->spacing = h;
      for (int i = 0; i < n; ++i) g->nodes[i] = a + i * h;
      g->weights.setConstant(h);
      break;
    }
  }
  return g;
}

bool GridSpec::same_layout(const GridSpec& other) const {
  return scheme == other.scheme && n == other.n && a == other.a && b == other.b;
}

bool GridSpec::interior_of(const GridSpec& outer) const {
  return scheme == NodeScheme::interior_only && outer.scheme == NodeScheme::endpoints_included &&
         n == outer.n - 2 && a == outer.a && b == outer.b;
}

LatticeVector::LatticeVector(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw PreconditionError("LatticeVector: null grid");
  if (values.size() != grid->n) throw PreconditionError("LatticeVector: size does not match grid");
}

LatticeVector ones_like(const GridPtr& grid) {
  if (!grid) throw PreconditionError("ones_like: null grid");
  return {grid, Eigen::VectorXd::Ones(grid->n)};
}

LatticeVector sample(const GridPtr& grid, const std::function<double(double)>& f) {
  if (!grid) throw PreconditionError("sample: null grid");
  Eigen::VectorXd v(grid->n);
  for (int i = 0; i < grid->n; ++i) v[i] = f(grid->nodes[i]);
  return {grid, std::move(v)};
}

double weighted_inner(const LatticeVector& phi, const LatticeVector& f) {
  if (!phi.grid || !f.grid || !phi.grid->same_layout(*f.grid))
    throw PreconditionError("weighted_inner: vectors live on different grids");
  // fixed left-to-right accumulation for determinism
  double s = 0.0;
  const auto& w = phi.grid->weights;
  for (int i = 0; i < phi.size(); ++i) s += w[i] * phi.values[i] * f.values[i];
  return s;
}

}  // namespace evdom
