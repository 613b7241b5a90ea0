#include "evdom/lattice.hpp"

#include <cmath>

#include "evdom/errors.hpp"

namespace evdom {

namespace {

void require_same_grid(const LatticeVector& f, const LatticeVector& u, const char* who) {
  if (!f.grid || !u.grid || !f.grid->same_layout(*u.grid))
    throw PreconditionError(std::string(who) + ": vectors live on different grids");
  if (f.size() == 0) throw PreconditionError(std::string(who) + ": empty vectors");
}

}  // namespace

GaugeResult gauge(const LatticeVector& f, const LatticeVector& u) {
  require_same_grid(f, u, "gauge");
  GaugeResult r;
  r.lower = std::numeric_limits<double>::infinity();
  r.upper = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    const double ui = u.values[i];
    if (!(ui > 0.0)) throw PreconditionError("gauge: u must be strictly positive");
    const double lo = f.values[i] / ui;
    const double hi = std::abs(f.values[i]) / ui;
    if (lo < r.lower) {
      r.lower = lo;
      r.argmin_index = i;
    }
    if (hi > r.upper) {
      r.upper = hi;
      r.argmax_index = i;
    }
  }
  return r;
}

bool strongly_positive(const LatticeVector& f, const LatticeVector& u, double eps) {
  return gauge(f, u).lower > eps;
}

bool dominates_vec(const LatticeVector& g, const LatticeVector& f, double eps) {
  require_same_grid(g, f, "dominates_vec");
  for (int i = 0; i < g.size(); ++i) {
    const double fi = std::abs(f.values[i]);
    if (g.values[i] < fi - eps * std::max(1.0, fi)) return false;
  }
  return true;
}

}  // namespace evdom
