#pragma once

#include "evdom/grid.hpp"

namespace evdom {

/// Result of measuring f against a strictly positive gauge vector u.
///
/// lower = min_i f_i / u_i  (signed; > 0 means f dominates a positive multiple of u)
/// upper = max_i |f_i| / u_i  (the gauge norm ||f||_u)
struct GaugeResult {
  double lower = 0.0;
  double upper = 0.0;
  int argmin_index = -1;
  int argmax_index = -1;
};

/// Gauge of f relative to u. Requires u strictly positive (every component > 0)
/// and f, u on the same grid.
GaugeResult gauge(const LatticeVector& f, const LatticeVector& u);

/// True iff f >= c*u componentwise for some c > eps, i.e. gauge(f, u).lower > eps.
bool strongly_positive(const LatticeVector& f, const LatticeVector& u, double eps);

/// Componentwise |f| <= g with hybrid absolute/relative slack:
/// g_i >= |f_i| - eps * max(1, |f_i|) for every i.
bool dominates_vec(const LatticeVector& g, const LatticeVector& f, double eps);

}  // namespace evdom
