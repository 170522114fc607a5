#pragma once

// Rayleigh-Ritz treatment of the radial problem in non-orthogonal monomial
// bases
//
//   phi_i(r) = r^(i+s) exp(-gamma r^2 / 4)   (GaussianMonomial)
//   phi_i(r) = r^(i+s) exp(-alpha r)         (ExponentialMonomial)
//
// All matrix elements reduce to the radial moments
// M_k = int_0^inf r^k w(r)^2 dr of the squared weight. The kinetic term uses
// the symmetric weak form 1/2 int phi_i' phi_j' r dr.

#include "qsmag/error.hpp"
#include "qsmag/model.hpp"
#include "qsmag/precision.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qsmag {

enum class BasisKind { GaussianMonomial, ExponentialMonomial };

inline const char* to_string(BasisKind k) {
  return k == BasisKind::GaussianMonomial ? "gaussian" : "exponential";
}

struct BasisSpec {
  BasisKind kind = BasisKind::GaussianMonomial;
  int N = 1;
  int s = 0;
  double gamma = 0.0;  // GaussianMonomial weight exp(-gamma r^2/4)
  double alpha = 1.0;  // ExponentialMonomial weight exp(-alpha r)

  static BasisSpec gaussian(int N, int s, double gamma) { return {BasisKind::GaussianMonomial, N, s, gamma, 1.0}; }
  static BasisSpec exponential(int N, int s, double alpha) {
    return {BasisKind::ExponentialMonomial, N, s, 0.0, alpha};
  }

  double weight_parameter() const { return kind == BasisKind::GaussianMonomial ? gamma : alpha; }

  void validate() const {
    require(N >= 1, "basis size N must be >= 1");
    require(s >= 0, "basis s must be >= 0");
    if (kind == BasisKind::GaussianMonomial) {
      require(gamma > 0.0, "Gaussian basis requires gamma > 0");
    } else {
      require(alpha > 0.0, "exponential basis requires alpha > 0");
    }
  }
};

/// Gaussian for gamma >= 1, exponential below: the Gaussian weight becomes
/// too diffuse to converge quickly at weak field.
inline BasisKind choose_basis_kind(double gamma) {
  return gamma >= 1.0 ? BasisKind::GaussianMonomial : BasisKind::ExponentialMonomial;
}

/// int_0^inf r^k w(r)^2 dr for the weight of the given basis family:
/// Gaussian 1/2 (2/gamma)^((k+1)/2) Gamma((k+1)/2), exponential
/// k! / (2 alpha)^(k+1). Evaluated through log-Gamma.
template <typename Real = double>
Real moment_integral(BasisKind kind, int k, const Real& weight_parameter) {
  using std::exp;
  using std::lgamma;
  using std::log;
  require(k >= 0, "moment order must be >= 0");
  require(weight_parameter > Real(0), "weight parameter must be > 0");
  Real log_value;
  if (kind == BasisKind::GaussianMonomial) {
    const Real half_k1 = Real(k + 1) / Real(2);
    log_value = -log(Real(2)) + half_k1 * log(Real(2) / weight_parameter) + lgamma(half_k1);
  } else {
    log_value = lgamma(Real(k + 1)) - Real(k + 1) * log(Real(2) * weight_parameter);
  }
  static const Real log_max = log((std::numeric_limits<Real>::max)());
  if (log_value > log_max - Real(8)) {
    std::ostringstream msg;
    msg << "moment integral overflows at k=" << k;
    throw NumericalError(msg.str());
  }
  return exp(log_value);
}

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
struct MatrixPair {
  Matrix<Real> H;
  Matrix<Real> S;
  BasisSpec basis;
  ModelParams params;
  /// 2-norm condition number of the diagonally equilibrated overlap
  /// D S D with D = diag(S)^(-1/2), which is what the solver factors.
  Real condition_S = 0;
  std::vector<std::string> warnings;
};

template <typename Real>
Real default_condition_threshold() {
  if constexpr (std::is_same_v<Real, double>) {
    return Real(1e12);
  } else {
    return Real(1e28);
  }
}

struct AssembleOptions {
  std::optional<double> condition_threshold;  // defaults per precision
};

template <typename Real = double>
MatrixPair<Real> assemble_matrices(const BasisSpec& basis, const ModelParams& params,
                                   const AssembleOptions& options = {}) {
  basis.validate();
  require(basis.s == params.s(), "basis s must equal |m|");
  require(params.Z() >= 0.0, "Rayleigh-Ritz requires Z >= 0");
  if (basis.kind == BasisKind::GaussianMonomial) {
    require(params.gamma() > 0.0, "Gaussian basis requires gamma > 0");
    require(basis.gamma == params.gamma(), "Gaussian basis weight must match the model gamma");
  } else {
    require(params.gamma() > 0.0 || params.Z() > 0.0, "gamma = 0 and Z = 0 has no bound states");
  }

  const int N = basis.N;
  const int s = basis.s;
  const Real gamma(params.gamma());
  const Real Z(params.Z());
  const Real p(basis.weight_parameter());
  const Real alpha(basis.alpha);
  const Real m2(params.m() * params.m());
  const int k_max = 2 * (N - 1 + s) + 3;
  std::vector<Real> M(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) M[k] = moment_integral<Real>(basis.kind, k, p);

  MatrixPair<Real> out{Matrix<Real>(N, N), Matrix<Real>(N, N), basis, params, Real(0), {}};
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      const int a = i + s;
      const int b = j + s;
      const int ab = a + b;
      const Real S_ij = M[ab + 1];
      Real kinetic(0);
      // a*b r^(a+b-1) term; zero for the a = b = 0 pair, so M_{-1} is never needed.
      if (a * b != 0) kinetic += Real(a * b) * M[ab - 1];
      if (basis.kind == BasisKind::GaussianMonomial) {
        kinetic += -Real(ab) * gamma / Real(2) * M[ab + 1] + gamma * gamma / Real(4) * M[ab + 3];
      } else {
        kinetic += -alpha * Real(ab) * M[ab] + alpha * alpha * M[ab + 1];
      }
      kinetic /= Real(2);
      Real potential = gamma * gamma / Real(8) * M[ab + 3] - Z * M[ab];
      if (s != 0) potential += m2 / Real(2) * M[ab - 1];
      out.S(i, j) = out.S(j, i) = S_ij;
      out.H(i, j) = out.H(j, i) = kinetic + potential;
    }
  }

  using std::sqrt;
  Vector<Real> d(N);
  for (int i = 0; i < N; ++i) d(i) = Real(1) / sqrt(out.S(i, i));
  const Matrix<Real> scaled = d.asDiagonal() * out.S * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(scaled, Eigen::EigenvaluesOnly);
  const Real lo = es.eigenvalues()(0);
  const Real hi = es.eigenvalues()(N - 1);
  out.condition_S = lo > Real(0) ? Real(hi / lo) : std::numeric_limits<Real>::infinity();
  const Real threshold =
      options.condition_threshold ? Real(*options.condition_threshold) : default_condition_threshold<Real>();
  if (!(out.condition_S <= threshold)) {
    std::ostringstream msg;
    msg << "overlap condition number " << static_cast<double>(out.condition_S) << " exceeds "
        << static_cast<double>(threshold) << " (N=" << N << ")";
    out.warnings.push_back(msg.str());
  }
  return out;
}

template <typename Real>
struct SpectrumResult {
  std::vector<Real> W;    // ascending
  Matrix<Real> vectors;   // column k is the S-normalized eigenvector of W[k]
  BasisSpec basis;
  ModelParams params;
  Real condition_S = 0;
  std::vector<std::string> warnings;

  std::vector<double> W_double() const {
    std::vector<double> out;
    out.reserve(W.size());
    for (const auto& w : W) out.push_back(static_cast<double>(w));
    return out;
  }
};

/// H v = W S v via Cholesky reduction of the equilibrated overlap.
template <typename Real>
SpectrumResult<Real> solve_generalized(const MatrixPair<Real>& pair) {
  using std::sqrt;
  const auto N = pair.S.rows();
  Vector<Real> d(N);
  for (Eigen::Index i = 0; i < N; ++i) d(i) = Real(1) / sqrt(pair.S(i, i));
  const Matrix<Real> S = d.asDiagonal() * pair.S * d.asDiagonal();
  const Matrix<Real> H = d.asDiagonal() * pair.H * d.asDiagonal();

  Eigen::LLT<Matrix<Real>> llt(S);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "overlap matrix is numerically indefinite (N=" << N
        << ", condition ~ " << static_cast<double>(pair.condition_S)
        << "); use --precision high or a smaller N";
    throw NumericalError(msg.str());
  }
  const Matrix<Real> L = llt.matrixL();
  Matrix<Real> C = L.template triangularView<Eigen::Lower>().solve(H);
  C = L.template triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
  C = (C + C.transpose()) / Real(2);

  Eigen::SelfAdjointEigenSolver<Matrix<Real>> es(C);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

  SpectrumResult<Real> out{{}, Matrix<Real>(N, N), pair.basis, pair.params, pair.condition_S, pair.warnings};
  const Matrix<Real> Y = L.transpose().template triangularView<Eigen::Upper>().solve(es.eigenvectors());
  out.vectors = d.asDiagonal() * Y;
  out.W.reserve(static_cast<std::size_t>(N));
  for (Eigen::Index k = 0; k < N; ++k) out.W.push_back(es.eigenvalues()(k));
  return out;
}

template <typename Real = double>
SpectrumResult<Real> rrm_spectrum(const BasisSpec& basis, const ModelParams& params,
                                  const AssembleOptions& options = {}) {
  return solve_generalized(assemble_matrices<Real>(basis, params, options));
}

/// A basis family without a size: kind plus exponential alpha.
struct BasisFamily {
  BasisKind kind = BasisKind::GaussianMonomial;
  double alpha = 1.0;

  BasisSpec at(int N, const ModelParams& params) const {
    return kind == BasisKind::GaussianMonomial ? BasisSpec::gaussian(N, params.s(), params.gamma())
                                               : BasisSpec::exponential(N, params.s(), alpha);
  }
};

struct ConvergenceTable {
  std::vector<int> N;
  std::vector<std::vector<double>> W;       // W[row][nu]
  std::vector<std::vector<double>> cauchy;  // |W_nu(N) - W_nu(N-1)|, NaN on the first row
  int levels = 0;
  int largest_usable_N = 0;
  std::vector<std::string> diagnostics;
};

template <typename Real = double>
ConvergenceTable converge_spectrum(const ModelParams& params, const BasisFamily& family, int N_min, int N_max,
                                   int levels) {
  require(levels >= 1, "levels must be >= 1");
  require(N_min >= levels, "N_min must be >= levels");
  require(N_max >= N_min, "N_max must be >= N_min");
  ConvergenceTable table;
  table.levels = levels;
  for (int N = N_min; N <= N_max; ++N) {
    std::optional<SpectrumResult<Real>> spec;
    try {
      spec.emplace(rrm_spectrum<Real>(family.at(N, params), params));
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "stopped at N=" << N << ": " << e.what();
      table.diagnostics.push_back(msg.str());
      break;
    }
    for (const auto& w : spec->warnings) table.diagnostics.push_back(w);
    std::vector<double> row(static_cast<std::size_t>(levels));
    for (int k = 0; k < levels; ++k) row[k] = static_cast<double>(spec->W[k]);
    std::vector<double> diff(levels, std::numeric_limits<double>::quiet_NaN());
    if (!table.W.empty()) {
      for (int k = 0; k < levels; ++k) diff[k] = std::abs(row[k] - table.W.back()[k]);
    }
    table.N.push_back(N);
    table.W.push_back(std::move(row));
    table.cauchy.push_back(std::move(diff));
    table.largest_usable_N = N;
  }
  return table;
}

struct Expectations {
  double inv_r = 0.0;
  double r2 = 0.0;
};

/// <1/r> and <r^2> in the S-normalized Ritz state `level`.
template <typename Real>
Expectations expectation_values(const SpectrumResult<Real>& result, int level) {
  require(level >= 0 && level < static_cast<int>(result.W.size()), "level out of range");
  const auto& basis = result.basis;
  const int N = basis.N;
  const int s = basis.s;
  const Real p(basis.weight_parameter());
  const auto v = result.vectors.col(level);
  Real inv_r(0), r2(0), norm(0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const int ab = i + j + 2 * s;
      const Real w = v(i) * v(j);
      inv_r += w * moment_integral<Real>(basis.kind, ab, p);
      r2 += w * moment_integral<Real>(basis.kind, ab + 3, p);
      norm += w * moment_integral<Real>(basis.kind, ab + 1, p);
    }
  }
  return {static_cast<double>(inv_r / norm), static_cast<double>(r2 / norm)};
}

/// Golden-section minimization of the `level`-th Ritz eigenvalue over the
/// exponential weight alpha in [lo, hi].
template <typename Real = double>
double optimize_alpha(const ModelParams& params, int N, int level, double lo = 0.02, double hi = 4.0,
                      int iterations = 60) {
  require(lo > 0.0 && hi > lo, "alpha search interval must satisfy 0 < lo < hi");
  auto f = [&](double alpha) {
    try {
      return static_cast<double>(rrm_spectrum<Real>(BasisSpec::exponential(N, params.s(), alpha), params).W[level]);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && (b - a) > 1e-10 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace qsmag
