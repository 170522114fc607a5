#pragma once

// Critical field strengths gamma_c at which the Ritz eigenvalue W_{nu s}
// crosses zero. W_{nu s} increases with gamma, so the crossing is bracketed
// geometrically and located by bisection on the nu-th Ritz eigenvalue, with
// the basis grown until the endpoint eigenvalues stop moving.

#include "qsmag/error.hpp"
#include "qsmag/model.hpp"
#include "qsmag/parallel.hpp"
#include "qsmag/precision.hpp"
#include "qsmag/ritz.hpp"

#include <Eigen/LU>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qsmag {

enum class BasisPolicy { Auto, Gaussian, Exponential };

inline const char* to_string(BasisPolicy p) {
  switch (p) {
    case BasisPolicy::Auto: return "auto";
    case BasisPolicy::Gaussian: return "gaussian";
    case BasisPolicy::Exponential: return "exponential";
  }
  return "auto";
}

struct CriticalOptions {
  Precision precision = Precision::Double;
  BasisPolicy basis = BasisPolicy::Auto;
  int N_min = 0;  // 0 selects nu + 2
  int N_max = 0;  // 0 selects 12 (double) or 30 (high)
  /// Minimize the nu-th eigenvalue over the exponential alpha once per basis
  /// size; otherwise `alpha` is used as given.
  bool optimize_alpha = true;
  double alpha = 1.0;
  double gamma_floor = 1e-6;
  double gamma_ceiling = 1e3;
};

struct CriticalGamma {
  int nu = 0;
  int s = 0;
  double Z = 0.0;
  double gamma_c = 0.0;
  double residual = 0.0;  // |W_{nu s}(gamma_c)|
  BasisSpec basis_used;
  std::pair<double, double> bracket{0.0, 0.0};
  bool converged = false;  // endpoint eigenvalues stable to tol/10
  bool certified = false;  // sign certificate at gamma_c (1 -/+ 1e-3), basis N+1
  std::vector<std::string> diagnostics;
};

namespace detail {

template <typename Real>
class CriticalSearch {
 public:
  CriticalSearch(int nu, int s, double Z, const CriticalOptions& options)
      : nu_(nu), s_(s), Z_(Z), options_(options) {
    alpha_ = options.optimize_alpha ? 2.0 * Z / (2.0 * nu + 2.0 * s + 1.0) : options.alpha;
  }

  BasisKind kind_at(double gamma) const {
    switch (options_.basis) {
      case BasisPolicy::Gaussian: return BasisKind::GaussianMonomial;
      case BasisPolicy::Exponential: return BasisKind::ExponentialMonomial;
      case BasisPolicy::Auto: break;
    }
    return choose_basis_kind(gamma);
  }

  BasisSpec basis_at(double gamma, int N) const {
    return kind_at(gamma) == BasisKind::GaussianMonomial ? BasisSpec::gaussian(N, s_, gamma)
                                                         : BasisSpec::exponential(N, s_, alpha_);
  }

  double W(double gamma, int N) const {
    const ModelParams params(Z_, gamma, s_);
    return static_cast<double>(rrm_spectrum<Real>(basis_at(gamma, N), params).W[nu_]);
  }

  void tune_alpha(double gamma, int N) {
    if (!options_.optimize_alpha || kind_at(gamma) != BasisKind::ExponentialMonomial) return;
    alpha_ = optimize_alpha<Real>(ModelParams(Z_, gamma, s_), N, nu_, 0.02 * Z_, 4.0 * Z_, 80);
  }

  /// Expansion from `guess` with relative steps step, 2 step, 4 step, ...
  /// (capped at doubling) until W changes sign.
  std::pair<double, double> bracket(double guess, int N, double step) const {
    double lo = guess, hi = guess;
    double wlo = W(lo, N);
    double whi = wlo;
    if (wlo < 0.0) {
      while (whi < 0.0) {
        lo = hi;
        hi *= 1.0 + step;
        step = std::min(2.0 * step, 1.0);
        if (hi > options_.gamma_ceiling) throw_bracket_failure();
        whi = W(hi, N);
      }
    } else {
      while (wlo >= 0.0) {
        hi = lo;
        lo /= 1.0 + step;
        step = std::min(2.0 * step, 1.0);
        if (lo < options_.gamma_floor) throw_bracket_failure();
        wlo = W(lo, N);
      }
    }
    return {lo, hi};
  }

  /// Bisection until |W(mid)| is well inside tol or the bracket reaches
  /// double resolution.
  std::pair<double, double> bisect(std::pair<double, double> br, int N, double tol) const {
    auto [lo, hi] = br;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double w = W(mid, N);
      if (w < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (std::abs(w) <= 1e-3 * tol && hi - lo <= 1e-12 * hi) break;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    return {lo, hi};
  }

  CriticalGamma run(double tol) {
    const int N_lo = options_.N_min > 0 ? std::max(options_.N_min, nu_ + 1) : nu_ + 2;
    const int N_hi = options_.N_max > 0 ? options_.N_max : (std::is_same_v<Real, double> ? 12 : 30);
    require(N_hi >= N_lo, "basis ceiling N_max is below the minimum size nu + 2");

    CriticalGamma out;
    out.nu = nu_;
    out.s = s_;
    out.Z = Z_;

    auto br = bracket(Z_ * Z_, N_lo, 1.0);
    br = bisect(br, N_lo, tol);
    double estimate = 0.5 * (br.first + br.second);
    std::optional<std::pair<double, double>> prev_endpoints;  // W_{N-1} at the previous bracket
    std::pair<double, double> prev_bracket = br;
    int N_used = N_lo;

    for (int N = N_lo; N <= N_hi; ++N) {
      tune_alpha(estimate, N);
      if (prev_endpoints) {
        const double wl = W(prev_bracket.first, N);
        const double wh = W(prev_bracket.second, N);
        if (std::abs(wl - prev_endpoints->first) <= tol / 10 && std::abs(wh - prev_endpoints->second) <= tol / 10) {
          out.converged = true;
        }
      }
      auto nb = bracket(estimate, N, 1e-6);
      nb = bisect(nb, N, tol);
      estimate = 0.5 * (nb.first + nb.second);
      N_used = N;
      prev_bracket = nb;
      prev_endpoints = std::make_pair(W(nb.first, N), W(nb.second, N));
      if (out.converged) break;
    }

    out.gamma_c = estimate;
    out.bracket = prev_bracket;
    out.basis_used = basis_at(estimate, N_used);
    out.residual = std::abs(W(estimate, N_used));
    if (!out.converged) {
      std::ostringstream msg;
      msg << "basis ceiling N=" << N_hi << " reached before endpoint eigenvalues converged to tol/10; best estimate";
      out.diagnostics.push_back(msg.str());
    }
    if (!(out.residual <= tol)) {
      std::ostringstream msg;
      msg << "residual " << out.residual << " exceeds tol " << tol;
      out.diagnostics.push_back(msg.str());
    }
    try {
      const double below = W(estimate * (1.0 - 1e-3), N_used + 1);
      const double above = W(estimate * (1.0 + 1e-3), N_used + 1);
      out.certified = below < 0.0 && above > 0.0;
    } catch (const NumericalError& e) {
      out.diagnostics.push_back(std::string("sign certificate unavailable: ") + e.what());
    }
    if (!out.certified) out.diagnostics.push_back("sign certificate failed at gamma_c (1 -/+ 1e-3)");
    return out;
  }

 private:
  [[noreturn]] void throw_bracket_failure() const {
    std::ostringstream msg;
    msg << "no sign change of W_{" << nu_ << "," << s_ << "} for gamma in (" << options_.gamma_floor << ", "
        << options_.gamma_ceiling << ")";
    throw NumericalError(msg.str());
  }

  int nu_;
  int s_;
  double Z_;
  CriticalOptions options_;
  double alpha_;
};

}  // namespace detail

/// gamma at which the nu-th Ritz eigenvalue of angular index s vanishes.
inline CriticalGamma critical_gamma(int nu, int s, double Z, double tol, const CriticalOptions& options = {}) {
  require(Z > 0.0, "critical_gamma requires Z > 0");
  require(tol > 0.0, "critical_gamma requires tol > 0");
  require(nu >= 0 && s >= 0, "critical_gamma requires nu >= 0 and s >= 0");
  if (options.precision == Precision::High) {
    return detail::CriticalSearch<HighPrecision>(nu, s, Z, options).run(tol);
  }
  return detail::CriticalSearch<double>(nu, s, Z, options).run(tol);
}

struct CriticalTable {
  std::vector<CriticalGamma> rows;                  // ascending nu, successful levels only
  std::vector<std::pair<int, std::string>> failures;  // (nu, reason)
  bool strictly_decreasing = true;
};

inline CriticalTable critical_table(int nu_max, int s, double Z, double tol, const CriticalOptions& options = {},
                                    unsigned jobs = 1) {
  require(nu_max >= 0, "nu_max must be >= 0");
  require(Z > 0.0, "critical_table requires Z > 0");
  require(tol > 0.0, "critical_table requires tol > 0");
  const auto count = static_cast<std::size_t>(nu_max) + 1;
  std::vector<std::optional<CriticalGamma>> results(count);
  std::vector<std::string> errors(count);
  parallel_for(count, jobs, [&](std::size_t nu) {
    try {
      results[nu] = critical_gamma(static_cast<int>(nu), s, Z, tol, options);
    } catch (const NumericalError& e) {
      errors[nu] = e.what();
    }
  });
  CriticalTable table;
  for (std::size_t nu = 0; nu < count; ++nu) {
    if (results[nu]) {
      table.rows.push_back(std::move(*results[nu]));
    } else {
      table.failures.emplace_back(static_cast<int>(nu), errors[nu]);
    }
  }
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    if (!(table.rows[k].gamma_c < table.rows[k - 1].gamma_c)) table.strictly_decreasing = false;
  }
  return table;
}

/// Cross-check for nu <= 2: bisection on the sign of det H(gamma) (the
/// secular determinant at W = 0) inside [lo, hi], with the basis family and
/// size of `basis` (its gamma is replaced by the trial gamma).
template <typename Real = double>
double critical_gamma_by_determinant(int nu, int s, double Z, const BasisSpec& basis, double lo, double hi) {
  require(nu >= 0 && nu <= 2, "determinant cross-check is provided for nu <= 2");
  require(lo > 0.0 && hi > lo, "determinant bracket must satisfy 0 < lo < hi");
  auto det_sign = [&](double gamma) {
    BasisSpec b = basis;
    if (b.kind == BasisKind::GaussianMonomial) b.gamma = gamma;
    const auto pair = assemble_matrices<Real>(b, ModelParams(Z, gamma, s));
    Vector<Real> d(pair.S.rows());
    using std::sqrt;
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = Real(1) / sqrt(pair.S(i, i));
    const Matrix<Real> H = d.asDiagonal() * pair.H * d.asDiagonal();
    const Real det = Eigen::PartialPivLU<Matrix<Real>>(H).determinant();
    return (Real(0) < det) - (det < Real(0));
  };
  int slo = det_sign(lo);
  const int shi = det_sign(hi);
  if (slo == shi || slo == 0 || shi == 0) {
    throw NumericalError("det H(gamma) does not change sign on the given bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int sm = det_sign(mid);
    if (sm == 0) return mid;
    if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qsmag
