#include "evdom/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <unordered_map>

#include "evdom/errors.hpp"

namespace evdom {

namespace {

constexpr double kPi = 3.14159265358979323846;

void sort_spectrum(Eigen::VectorXcd& values, Eigen::MatrixXcd& vectors) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (values[i].real() != values[j].real()) return values[i].real() > values[j].real();
    return values[i].imag() < values[j].imag();
  });
  Eigen::VectorXcd sv(n);
  Eigen::MatrixXcd sm(vectors.rows(), n);
  for (int c = 0; c < n; ++c) {
    sv[c] = values[order[c]];
    sm.col(c) = vectors.col(order[c]);
  }
  values = std::move(sv);
  vectors = std::move(sm);
}

std::shared_ptr<const SpectralData> compute_spectral_data(const OperatorHandle& op) {
  const int n = static_cast<int>(op.matrix.rows());
  auto data = std::make_shared<SpectralData>();

  if (op.weighted_symmetric) {
    // Similarity with W^(1/2) makes the matrix plainly symmetric.
    const Eigen::VectorXd d = op.grid->weights.cwiseSqrt();
    const Eigen::MatrixXd s =
        d.asDiagonal() * op.matrix * d.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (s + s.transpose()));
    if (solver.info() != Eigen::Success)
      throw NumericalError("analyze: symmetric eigensolver failed for " + op.name);
    data->eigenvalues = solver.eigenvalues().cast<std::complex<double>>();
    data->right_eigenvectors =
        (d.cwiseInverse().asDiagonal() * solver.eigenvectors()).cast<std::complex<double>>();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(op.matrix);
    if (solver.info() != Eigen::Success)
      throw NumericalError("analyze: eigensolver failed for " + op.name);
    data->eigenvalues = solver.eigenvalues();
    data->right_eigenvectors = solver.eigenvectors();
  }

  sort_spectrum(data->eigenvalues, data->right_eigenvectors);
  data->spectral_bound = data->eigenvalues[0].real();
  if (n >= 2) {
    data->gap = data->spectral_bound - data->eigenvalues[1].real();
    data->dominant = data->gap > 1e-8 * std::max(1.0, std::abs(data->spectral_bound));
  } else {
    data->gap = 0.0;
    data->dominant = true;
  }
  return data;
}

std::shared_mutex& cache_mutex() {
  static std::shared_mutex m;
  return m;
}

std::unordered_map<std::uint64_t, std::shared_ptr<const SpectralData>>& cache_map() {
  static std::unordered_map<std::uint64_t, std::shared_ptr<const SpectralData>> map;
  return map;
}

Eigen::MatrixXcd contour_projection(const Eigen::MatrixXd& a, double lambda0, double radius) {
  const int n = static_cast<int>(a.rows());
  const int points = 64;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
  for (int k = 0; k < points; ++k) {
    const double theta = 2 * kPi * k / points;
    const std::complex<double> offset = radius * std::exp(std::complex<double>(0.0, theta));
    const std::complex<double> z = lambda0 + offset;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z * id - ac);
    acc += lu.solve(id) * offset;
  }
  return acc / static_cast<double>(points);
}

}  // namespace

std::shared_ptr<const SpectralData> analyze(const OperatorHandle& op) {
  {
    std::shared_lock lock(cache_mutex());
    auto it = cache_map().find(op.id);
    if (it != cache_map().end()) return it->second;
  }
  auto data = compute_spectral_data(op);
  std::unique_lock lock(cache_mutex());
  auto [it, inserted] = cache_map().emplace(op.id, std::move(data));
  return it->second;
}

double default_cluster_tol(const OperatorHandle& op) {
  return 1e-6 * std::max(1.0, op.matrix.cwiseAbs().maxCoeff());
}

ProjectionData spectral_projection(const OperatorHandle& op, double lambda0, double cluster_tol) {
  const auto sd = analyze(op);
  const int n = static_cast<int>(sd->eigenvalues.size());

  std::vector<int> cluster;
  double max_in = 0.0;
  double min_excluded = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double dist = std::abs(sd->eigenvalues[i] - std::complex<double>(lambda0, 0.0));
    if (dist <= cluster_tol) {
      cluster.push_back(i);
      max_in = std::max(max_in, dist);
    } else {
      min_excluded = std::min(min_excluded, dist);
    }
  }
  if (cluster.empty())
    throw PreconditionError("spectral_projection: no eigenvalue within cluster_tol of lambda0");
  if (min_excluded <= 2 * cluster_tol)
    throw AmbiguousClusterError(
        "spectral_projection: an eigenvalue straddles the cluster boundary at lambda0=" +
        std::to_string(lambda0));

  ProjectionData out;
  out.lambda0 = lambda0;
  out.algebraic_multiplicity = static_cast<int>(cluster.size());

  Eigen::MatrixXcd p_complex;
  bool need_contour = false;
  {
    const Eigen::MatrixXcd& v = sd->right_eigenvectors;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
    if (lu.rcond() < 1e-12) {
      need_contour = true;
    } else {
      const Eigen::MatrixXcd vinv = lu.solve(Eigen::MatrixXcd::Identity(n, n));
      Eigen::MatrixXcd vc(n, cluster.size());
      Eigen::MatrixXcd wc(cluster.size(), n);
      for (size_t c = 0; c < cluster.size(); ++c) {
        vc.col(c) = v.col(cluster[c]);
        wc.row(c) = vinv.row(cluster[c]);
      }
      p_complex = vc * wc;
    }
  }
  if (need_contour) {
    const double radius = std::isfinite(min_excluded)
                              ? 0.5 * (max_in + min_excluded)
                              : max_in + std::max(1.0, std::abs(lambda0));
    p_complex = contour_projection(op.matrix, lambda0, radius);
  }

  const double imag_residual = p_complex.imag().cwiseAbs().maxCoeff();
  const double p_scale = std::max(1.0, p_complex.real().cwiseAbs().maxCoeff());
  if (imag_residual > 1e-8 * p_scale)
    throw NumericalError("spectral_projection: projection has a non-negligible imaginary part");
  out.P = p_complex.real();

  // Pole order from powers of the nilpotent part N = (A - lambda0) P.
  Eigen::MatrixXd shifted = op.matrix;
  shifted.diagonal().array() -= lambda0;
  const double shifted_scale = std::max(1.0, shifted.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd nil = shifted * out.P;
  Eigen::MatrixXd power = nil;
  double tol = 1e-7 * shifted_scale * std::max(1.0, out.P.cwiseAbs().maxCoeff());
  out.pole_order_estimate = 0;
  for (int j = 1; j <= out.algebraic_multiplicity; ++j) {
    if (power.cwiseAbs().maxCoeff() <= tol) {
      out.pole_order_estimate = j;
      break;
    }
    power = power * nil;
    tol *= shifted_scale;
  }
  if (out.pole_order_estimate == 0)
    throw NumericalError("spectral_projection: nilpotency of the cluster could not be confirmed");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.P);
  const auto& sing = svd.singularValues();
  const double rank_tol = 1e-10 * std::max(1.0, sing.size() > 0 ? sing[0] : 0.0);
  out.rank = 0;
  for (int i = 0; i < sing.size(); ++i)
    if (sing[i] > rank_tol) ++out.rank;
  return out;
}

ProjectionData spectral_projection(const OperatorHandle& op, double lambda0) {
  return spectral_projection(op, lambda0, default_cluster_tol(op));
}

ProjectionData mean_ergodic_projection(const OperatorHandle& op) {
  const auto sd = analyze(op);
  const double scale = std::max(1.0, op.matrix.cwiseAbs().maxCoeff());
  if (std::abs(sd->spectral_bound) > 1e-8 * scale)
    throw PreconditionError(
        "mean_ergodic_projection: spectral bound is not 0; rescale the operator first");

  const double cluster_tol = default_cluster_tol(op);
  auto proj = spectral_projection(op, 0.0, cluster_tol);
  if (proj.pole_order_estimate != 1)
    throw NonErgodicError("mean_ergodic_projection: defective cluster at 0");
  for (int i = 0; i < sd->eigenvalues.size(); ++i) {
    const auto ev = sd->eigenvalues[i];
    if (std::abs(ev - std::complex<double>(0.0, 0.0)) <= cluster_tol) continue;
    if (std::abs(ev.real()) <= 1e-8 * scale)
      throw NonErgodicError(
          "mean_ergodic_projection: spectrum on the imaginary axis away from 0");
  }
  return proj;
}

}  // namespace evdom
