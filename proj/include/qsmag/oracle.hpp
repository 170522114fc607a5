#pragma once

// Independent finite-difference solver for the radial equation.
//
// The radial operator is discretized in conservative form,
//   -1/(2r) (r R')'  ~  -1/(2 h^2 r_k) [r_{k+1/2}(R_{k+1}-R_k) - r_{k-1/2}(R_k-R_{k-1})],
// on the staggered grid r_k = (k - 1/2) h, k = 1..n. The flux through r = 0
// vanishes identically and R_{n+1} = 0 closes the outer end. With
// u_k = sqrt(r_k) R_k the matrix becomes symmetric tridiagonal; its lowest
// eigenvalues are found by Sturm-count bisection and Richardson-extrapolated
// from grids h and h/2.

#include "qsmag/error.hpp"
#include "qsmag/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qsmag {

struct GridSpec {
  double r_max = 0.0;
  int n_points = 0;  // coarse grid; the fine grid uses 2 n_points

  void validate() const {
    require(r_max > 0.0, "grid r_max must be > 0");
    require(n_points >= 100, "grid needs n_points >= 100");
  }
};

/// Domain and resolution chosen from the decay of the requested levels:
/// exp(-gamma r^2/4) r^(2 nu + s) < 1e-12 for gamma > 0, and
/// exp(-kappa r) < 1e-12 with kappa = 2Z/(2 nu + 2s + 1) for the Coulomb tail
/// (and exp(-Z r) < 1e-10 when gamma = 0).
inline GridSpec auto_grid(const ModelParams& params, int levels) {
  const double log_cut = std::log(1e12);
  const int s = params.s();
  const int nu_top = levels - 1;
  double r_max = std::numeric_limits<double>::infinity();
  if (params.gamma() > 0.0) {
    double r = std::sqrt(4.0 * log_cut / params.gamma());
    for (int it = 0; it < 20; ++it) {
      r = std::sqrt(4.0 * (log_cut + (2.0 * nu_top + s) * std::log(std::max(r, 1.0))) / params.gamma());
    }
    r_max = r;
  }
  if (params.Z() > 0.0) {
    const double kappa = 2.0 * params.Z() / (2.0 * nu_top + 2.0 * s + 1.0);
    double r = log_cut / kappa;
    for (int it = 0; it < 20; ++it) r = (log_cut + (2.0 * nu_top + s + 1.0) * std::log(std::max(r, 1.0))) / kappa;
    if (params.gamma() == 0.0) r = std::max(r, std::log(1e10) / params.Z());
    r_max = std::min(r_max, r);
  }
  r_max = std::min(r_max, 2000.0);
  double h = 0.004;
  if (params.Z() > 1.0) h /= params.Z();
  if (params.gamma() > 1.0) h = std::min(h, 0.004 / std::sqrt(params.gamma()));
  const double n = std::clamp(std::ceil(r_max / h), 100.0, 400000.0);
  return {r_max, static_cast<int>(n)};
}

namespace detail {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[k] couples k and k+1
};

inline Tridiagonal radial_tridiagonal(const ModelParams& params, double r_max, int n) {
  const double h = r_max / n;
  const double Z = params.Z();
  const double g2 = params.gamma() * params.gamma();
  const double m2 = static_cast<double>(params.m()) * params.m();
  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.resize(static_cast<std::size_t>(n) - 1);
  for (int k = 0; k < n; ++k) {
    const double r = (k + 0.5) * h;
    const double r_in = k * h;  // r_{k-1/2}; zero at the origin
    const double r_out = (k + 1.0) * h;
    t.diag[k] = (r_in + r_out) / (2.0 * h * h * r) + m2 / (2.0 * r * r) + g2 * r * r / 8.0 - Z / r;
    if (k + 1 < n) {
      const double r_next = r + h;
      t.off[k] = -r_out / (2.0 * h * h * std::sqrt(r * r_next));
    }
  }
  return t;
}

// Number of eigenvalues strictly below x.
inline int count_below(const Tridiagonal& t, double x) {
  int count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min() * 4.0;
  for (std::size_t k = 0; k < t.diag.size(); ++k) {
    const double e2 = k == 0 ? 0.0 : t.off[k - 1] * t.off[k - 1];
    q = t.diag[k] - x - (k == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

inline std::vector<double> lowest_eigenvalues(const Tridiagonal& t, int levels) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < t.diag.size(); ++k) {
    const double radius = (k > 0 ? std::abs(t.off[k - 1]) : 0.0) + (k < t.off.size() ? std::abs(t.off[k]) : 0.0);
    lo = std::min(lo, t.diag[k] - radius);
    hi = std::max(hi, t.diag[k] + radius);
  }
  std::vector<double> out;
  for (int level = 0; level < levels; ++level) {
    double a = lo, b = hi;
    while (b - a > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b))) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (count_below(t, mid) > level) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace detail

/// Raw eigenvalues on one grid, no extrapolation.
inline std::vector<double> oracle_raw(const ModelParams& params, double r_max, int n_points, int levels) {
  require(levels >= 1, "oracle needs levels >= 1");
  require(n_points > levels, "grid must have more points than requested levels");
  return detail::lowest_eigenvalues(detail::radial_tridiagonal(params, r_max, n_points), levels);
}

struct OracleResult {
  std::vector<double> W;         // Richardson-extrapolated
  std::vector<double> W_coarse;  // step h
  std::vector<double> W_fine;    // step h/2
  GridSpec grid;
  bool converged = true;
  std::vector<std::string> diagnostics;
};

/// Lowest `levels` eigenvalues W of the radial equation. Non-convergence
/// (|W_extrapolated - W_fine| > tolerance) is flagged with both raw values.
inline OracleResult oracle_solve(const ModelParams& params, std::optional<GridSpec> grid, int levels,
                                 double tolerance = 1e-4) {
  require(levels >= 1, "oracle needs levels >= 1");
  require(params.Z() >= 0.0, "oracle requires Z >= 0");
  require(params.gamma() > 0.0 || params.Z() > 0.0, "gamma = 0 and Z = 0 has no bound states");
  OracleResult out;
  out.grid = grid ? *grid : auto_grid(params, levels);
  out.grid.validate();
  out.W_coarse = oracle_raw(params, out.grid.r_max, out.grid.n_points, levels);
  out.W_fine = oracle_raw(params, out.grid.r_max, 2 * out.grid.n_points, levels);
  for (int k = 0; k < levels; ++k) {
    const double extrapolated = (4.0 * out.W_fine[k] - out.W_coarse[k]) / 3.0;
    out.W.push_back(extrapolated);
    if (!(std::abs(extrapolated - out.W_fine[k]) <= tolerance)) {
      out.converged = false;
      std::ostringstream msg;
      msg.precision(17);
      msg << "level " << k << " extrapolation not converged: coarse " << out.W_coarse[k] << ", fine "
          << out.W_fine[k];
      out.diagnostics.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace qsmag
