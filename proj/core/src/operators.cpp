#include "evdom/operators.hpp"

#include <atomic>
#include <cmath>

#include "evdom/errors.hpp"

namespace evdom {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t next_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

bool measure_weighted_symmetry(const Eigen::MatrixXd& m, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd wm = w.asDiagonal() * m;
  const double residual = (wm - wm.transpose()).cwiseAbs().maxCoeff();
  const double scale = m.cwiseAbs().maxCoeff();
  return residual < 1e-10 * (scale > 0 ? scale : 1.0);
}

OperatorHandle finish(std::string name, GridPtr grid, Eigen::MatrixXd matrix, std::string family,
                      std::vector<ExactEigenvalue> exact = {}) {
  OperatorHandle op;
  op.name = std::move(name);
  op.grid = std::move(grid);
  op.weighted_symmetric = measure_weighted_symmetry(matrix, op.grid->weights);
  op.matrix = std::move(matrix);
  op.exact_spectrum = std::move(exact);
  op.family = std::move(family);
  op.id = next_id();
  return op;
}

Eigen::MatrixXd second_difference_core(int n, double h) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double c = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    m(i, i) = -2 * c;
    if (i > 0) m(i, i - 1) = c;
    if (i + 1 < n) m(i, i + 1) = c;
  }
  return m;
}

}  // namespace

const char* to_string(BoundaryKind bc) {
  switch (bc) {
    case BoundaryKind::dirichlet: return "dirichlet";
    case BoundaryKind::neumann: return "neumann";
    case BoundaryKind::antisymmetric: return "antisymmetric";
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::nonlocal_beta: return "nonlocal-beta";
    case BoundaryKind::nonlocal_symmetric: return "nonlocal-symmetric";
  }
  return "?";
}

std::pair<double, double> default_interval(BoundaryKind bc) {
  switch (bc) {
    case BoundaryKind::antisymmetric: return {-1.0, 1.0};
    case BoundaryKind::nonlocal_beta: return {0.0, kPi};
    default: return {0.0, 1.0};
  }
}

OperatorHandle build_laplacian(const LaplacianSpec& spec) {
  if (spec.n < 8) throw PreconditionError("build_laplacian: n must be >= 8");
  auto [a, b] = default_interval(spec.bc);
  if (spec.interval) {
    if (spec.bc == BoundaryKind::nonlocal_beta || spec.bc == BoundaryKind::nonlocal_symmetric)
      throw PreconditionError("build_laplacian: interval override unsupported for nonlocal kinds");
    std::tie(a, b) = *spec.interval;
    if (!(b > a)) throw PreconditionError("build_laplacian: requires b > a");
  }
  const double len = b - a;
  const int n = spec.n;

  switch (spec.bc) {
    case BoundaryKind::dirichlet: {
      auto grid = GridSpec::make(a, b, n, NodeScheme::interior_only);
      Eigen::MatrixXd m = second_difference_core(n, grid->spacing);
      std::vector<ExactEigenvalue> exact;
      for (int k = 1; k <= 4; ++k)
        exact.push_back({-k * k * kPi * kPi / (len * len), "sin mode k=" + std::to_string(k)});
      return finish("dirichlet", grid, std::move(m), "laplacian", std::move(exact));
    }
    case BoundaryKind::neumann: {
      auto grid = GridSpec::make(a, b, n, NodeScheme::endpoints_included);
      const double h = grid->spacing;
      Eigen::MatrixXd m = second_difference_core(n, h);
      // f'(a) = 0 and f'(b) = 0: ghost values mirror the inner neighbours.
      m(0, 1) = 2.0 / (h * h);
      m(n - 1, n - 2) = 2.0 / (h * h);
      std::vector<ExactEigenvalue> exact;
      for (int k = 0; k <= 3; ++k)
        exact.push_back({-k * k * kPi * kPi / (len * len), "cos mode k=" + std::to_string(k)});
      return finish("neumann", grid, std::move(m), "laplacian", std::move(exact));
    }
    case BoundaryKind::antisymmetric: {
      // f(a) = -f(b), f'(a) = -f'(b). The antisymmetric extension gives the
      // ghost values f(a-h) = -f(b-h) and f(b+h) = -f(a+h).
      auto grid = GridSpec::make(a, b, n, NodeScheme::endpoints_included);
      const double h = grid->spacing;
      const double c = 1.0 / (h * h);
      Eigen::MatrixXd m = second_difference_core(n, h);
      m(0, n - 2) -= c;
      m(n - 1, 1) -= c;
      std::vector<ExactEigenvalue> exact;
      for (int k = 0; k <= 2; ++k) {
        const double lam = -(k + 0.5) * (k + 0.5) * 4 * kPi * kPi / (len * len);
        exact.push_back({lam, "half-integer mode k=" + std::to_string(k) + " (multiplicity 2)"});
        exact.push_back({lam, "half-integer mode k=" + std::to_string(k) + " (multiplicity 2)"});
      }
      return finish("antisymmetric", grid, std::move(m), "laplacian", std::move(exact));
    }
    case BoundaryKind::periodic: {
      // f(a) = f(b), f'(a) = f'(b), kept on the closed grid so the node set
      // matches the antisymmetric operator: ghosts f(a-h) = f(b-h),
      // f(b+h) = f(a+h).
      auto grid = GridSpec::make(a, b, n, NodeScheme::endpoints_included);
      const double h = grid->spacing;
      const double c = 1.0 / (h * h);
      Eigen::MatrixXd m = second_difference_core(n, h);
      m(0, n - 2) += c;
      m(n - 1, 1) += c;
      std::vector<ExactEigenvalue> exact;
      for (int k = 0; k <= 2; ++k)
        exact.push_back({-k * k * 4 * kPi * kPi / (len * len), "full mode k=" + std::to_string(k)});
      return finish("periodic", grid, std::move(m), "laplacian", std::move(exact));
    }
    case BoundaryKind::nonlocal_beta: {
      if (!(spec.beta > -0.5 && spec.beta < 0.0))
        throw PreconditionError("build_laplacian: beta must lie in (-1/2, 0)");
      auto grid = GridSpec::make(a, b, n, NodeScheme::endpoints_included);
      const double h = grid->spacing;
      const double c = 1.0 / (h * h);
      Eigen::MatrixXd m = second_difference_core(n, h);
      // f'(0) = 0: ghost mirrors; f'(pi) = beta f(0): ghost
      // f(pi+h) = f(pi-h) + 2 h beta f(0).
      m(0, 1) = 2 * c;
      m(n - 1, n - 2) = 2 * c;
      m(n - 1, 0) += 2 * spec.beta / h;
      const double mu = solve_transcendental_mu(spec.beta);
      std::vector<ExactEigenvalue> exact{{-mu * mu, "leading eigenvalue -mu^2"}};
      return finish("nonlocal-beta(" + std::to_string(spec.beta) + ")", grid, std::move(m),
                    "laplacian", std::move(exact));
    }
    case BoundaryKind::nonlocal_symmetric: {
      auto grid = GridSpec::make(a, b, n, NodeScheme::endpoints_included);
      const double h = grid->spacing;
      const double c = 1.0 / (h * h);
      Eigen::MatrixXd m = second_difference_core(n, h);
      // f'(0) = f(0) + f(1):   ghost f(-h)  = f(h)   - 2h (f(0)+f(1))
      // f'(1) = -(f(0)+f(1)):  ghost f(1+h) = f(1-h) - 2h (f(0)+f(1))
      m(0, 1) = 2 * c;
      m(0, 0) += -2.0 / h;
      m(0, n - 1) += -2.0 / h;
      m(n - 1, n - 2) = 2 * c;
      m(n - 1, n - 1) += -2.0 / h;
      m(n - 1, 0) += -2.0 / h;
      return finish("nonlocal-symmetric", grid, std::move(m), "laplacian");
    }
  }
  throw PreconditionError("build_laplacian: unknown boundary kind");
}

OperatorHandle build_laplacian(BoundaryKind bc, int n, double beta) {
  LaplacianSpec spec;
  spec.bc = bc;
  spec.n = n;
  spec.beta = beta;
  return build_laplacian(spec);
}

OperatorHandle build_odd_order(int k, int n) {
  if (k < 0) throw PreconditionError("build_odd_order: k must be >= 0");
  if (n < 16 || n % 2 != 0) throw PreconditionError("build_odd_order: n must be even and >= 16");
  auto grid = GridSpec::make(0.0, 1.0, n, NodeScheme::periodic_left_closed);

  // Circulant kernel c_d = -(2/n) sum_m s_m sin(2 pi m d / n) with the real
  // symbol factor s_m defined by (2 pi i m)^(2k+1) = i * s_m. The d <-> n-d
  // antisymmetry is enforced exactly so each row sums to zero up to rounding
  // of the final reduction only.
  Eigen::VectorXd kernel = Eigen::VectorXd::Zero(n);
  const int half = n / 2;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  for (int d = 1; d < half; ++d) {
    double acc = 0.0;
    for (int m = 1; m < half; ++m) {
      const double s_m = sign * std::pow(2 * kPi * m, 2 * k + 1);
      acc += s_m * std::sin(2 * kPi * m * d / n);
    }
    kernel[d] = -(2.0 / n) * acc;
  }
  for (int d = 1; d < half; ++d) kernel[n - d] = -kernel[d];

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = kernel[((i - j) % n + n) % n];

  std::vector<ExactEigenvalue> exact;
  exact.push_back({0.0, "constant mode m=0"});
  for (int mode = 1; mode <= 2; ++mode) {
    const double s_m = sign * std::pow(2 * kPi * mode, 2 * k + 1);
    exact.push_back({{0.0, s_m}, "mode m=" + std::to_string(mode)});
    exact.push_back({{0.0, -s_m}, "mode m=-" + std::to_string(mode)});
  }
  return finish("odd-order(" + std::to_string(k) + ")", grid, std::move(m), "odd_order",
                std::move(exact));
}

RankOneExampleBundle build_rank_one_example(int n) {
  if (n < 16) throw PreconditionError("build_rank_one_example: n must be >= 16");
  auto grid = GridSpec::make(0.0, 1.0, n, NodeScheme::endpoints_included);
  const auto& w = grid->weights;

  Eigen::VectorXd density_a = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd density_b(n);
  for (int i = 0; i < n; ++i) density_b[i] = 2 * grid->nodes[i];

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd pa = ones * (w.cwiseProduct(density_a)).transpose();
  Eigen::MatrixXd pb = ones * (w.cwiseProduct(density_b)).transpose();
  Eigen::MatrixXd ma = pa - 1.5 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd mb = pb - Eigen::MatrixXd::Identity(n, n);

  RankOneExampleBundle bundle;
  bundle.PA = finish("rank-one-PA", grid, std::move(pa), "rank_one",
                     {{1.0, "range of the projection"}, {0.0, "kernel (multiplicity n-1)"}});
  bundle.PB = finish("rank-one-PB", grid, std::move(pb), "rank_one",
                     {{1.0, "range of the projection"}, {0.0, "kernel (multiplicity n-1)"}});
  bundle.A = finish("rank-one-A", grid, std::move(ma), "rank_one",
                    {{-0.5, "range direction"}, {-1.5, "kernel directions (multiplicity n-1)"}});
  bundle.B = finish("rank-one-B", grid, std::move(mb), "rank_one",
                    {{0.0, "range direction"}, {-1.0, "kernel directions (multiplicity n-1)"}});
  bundle.phi_A = LatticeVector(grid, std::move(density_a));
  bundle.phi_B = LatticeVector(grid, std::move(density_b));
  return bundle;
}

LatticeVector test_function_fn(int n_index, const GridPtr& grid) {
  if (n_index < 1) throw PreconditionError("test_function_fn: n_index must be >= 1");
  return sample(grid, [n_index](double x) { return std::max(1.0 - n_index * x, 0.0); });
}

double solve_transcendental_mu(double beta) {
  if (!(beta > -0.5 && beta < 0.0))
    throw PreconditionError("solve_transcendental_mu: beta must lie in (-1/2, 0)");
  // g(mu) = mu sin(mu pi) is strictly increasing from 0 to 1/2 on [0, 1/2].
  auto g = [](double mu) { return mu * std::sin(mu * kPi); };
  const double target = -beta;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

OperatorHandle make_custom_operator(std::string name, GridPtr grid, Eigen::MatrixXd matrix,
                                    std::string family) {
  if (!grid) throw PreconditionError("make_custom_operator: null grid");
  if (matrix.rows() != grid->n || matrix.cols() != grid->n)
    throw PreconditionError("make_custom_operator: matrix does not match grid size");
  return finish(std::move(name), std::move(grid), std::move(matrix), std::move(family));
}

OperatorHandle shift_operator(const OperatorHandle& op, double s) {
  Eigen::MatrixXd m = op.matrix;
  m.diagonal().array() -= s;
  auto shifted = finish(op.name + "-shifted", op.grid, std::move(m), op.family);
  shifted.exact_spectrum.clear();
  return shifted;
}

}  // namespace evdom
