#pragma once

// Exact polynomial (quasi-solvable) eigenstates.
//
// With R(r) = r^s exp(-gamma r^2/4) sum_j c_j r^j the coefficients obey the
// three-term recurrence
//
//   c_{j+2} = A_j c_{j+1} + B_j c_j,
//   A_j = -2Z / ((j+2)(j+2s+2)),   B_j = (gamma (j+s+1) - 2W) / ((j+2)(j+2s+2)),
//
// seeded by c_0 = 1, c_1 = -2Z/(2s+1). A degree-n polynomial needs
// c_{n+1} = c_{n+2} = 0: B_n = 0 fixes W = gamma (n+s+1)/2, after which
// c_{n+1}(gamma) = 0 is a polynomial condition on gamma. That polynomial is
// built in exact rational arithmetic, its positive roots are isolated with a
// Sturm chain and polished by rational bisection.

#include "qsmag/error.hpp"
#include "qsmag/model.hpp"
#include "qsmag/polynomial.hpp"
#include "qsmag/precision.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qsmag {

/// Recurrence multipliers A_j, B_j for j = 0..n_terms-2 at fixed W.
template <typename T>
struct RecurrenceCoeffs {
  std::vector<T> A;
  std::vector<T> B;
  int n_terms = 0;
  T Z{};
  T gamma{};
  T W{};
  int s = 0;
};

template <typename T>
RecurrenceCoeffs<T> recurrence_coeffs(const T& Z, int s, const T& gamma, const T& W, int n_terms) {
  require(n_terms >= 1, "recurrence needs n_terms >= 1");
  require(s >= 0, "s must be >= 0");
  RecurrenceCoeffs<T> rc;
  rc.n_terms = n_terms;
  rc.Z = Z;
  rc.gamma = gamma;
  rc.W = W;
  rc.s = s;
  for (int j = 0; j + 2 <= n_terms; ++j) {
    const T den = T((j + 2) * (j + 2 * (s + 1)));
    rc.A.push_back(T(-2) * Z / den);
    rc.B.push_back((gamma * T(j + s + 1) - T(2) * W) / den);
  }
  return rc;
}

/// c_0 .. c_{n_terms} with c_0 = 1. Exact when T is Rational.
template <typename T>
std::vector<T> ttrr_coefficients(const T& Z, int s, const T& gamma, const T& W, int n_terms) {
  const auto rc = recurrence_coeffs(Z, s, gamma, W, n_terms);
  std::vector<T> c(static_cast<std::size_t>(n_terms) + 1);
  c[0] = T(1);
  c[1] = T(-2) * Z / T(2 * s + 1);
  for (int j = 0; j + 2 <= n_terms; ++j) c[j + 2] = rc.A[j] * c[j + 1] + rc.B[j] * c[j];
  return c;
}

inline std::vector<double> ttrr_coefficients(const ModelParams& params, double W, int n_terms) {
  return ttrr_coefficients<double>(params.Z(), params.s(), params.gamma(), W, n_terms);
}

/// c_{n+1} as an exact polynomial in gamma once W has been eliminated.
struct TerminationPolynomial {
  int n = 0;
  int s = 0;
  Rational Z;
  Polynomial<Rational> coeffs;  // ascending powers of gamma
  int degree = 0;
};

/// Builds c_{n+1}(gamma) with B_j = gamma (j-n) / ((j+2)(j+2s+2)).
inline TerminationPolynomial termination_polynomial(int n, int s, const Rational& Z) {
  require(n >= 0, "termination polynomial needs n >= 0");
  require(s >= 0, "s must be >= 0");
  require(Z > 0, "termination polynomial needs Z > 0");
  if (n == 0) {
    std::ostringstream msg;
    msg << "no QS solution at n=0 for Z!=0: c_1 = -2Z/(2s+1) = " << Rational(-2 * Z / (2 * s + 1))
        << " has no gamma root";
    throw DomainError(msg.str());
  }
  using P = Polynomial<Rational>;
  std::vector<P> c;
  c.reserve(static_cast<std::size_t>(n) + 2);
  c.push_back(P::constant(Rational(1)));
  c.push_back(P::constant(Rational(-2 * Z / (2 * s + 1))));
  for (int j = 0; j + 2 <= n + 1; ++j) {
    const Rational den((j + 2) * (j + 2 * (s + 1)));
    const Rational a = -2 * Z / den;
    const P b = P::linear(Rational(0), Rational(j - n) / den);
    c.push_back(c[j + 1] * a + b * c[j]);
  }
  TerminationPolynomial tp;
  tp.n = n;
  tp.s = s;
  tp.Z = Z;
  tp.coeffs = c[n + 1];
  tp.degree = tp.coeffs.degree();
  return tp;
}

/// One exact polynomial eigenstate. Coefficients are normalized to c_0 = 1.
struct QsSolution {
  int n = 0;
  int s = 0;
  int index = 0;  // i = 1 is the largest gamma root
  Rational Z;
  HighPrecision gamma = 0;
  HighPrecision W = 0;
  std::vector<HighPrecision> coeffs;  // c_0 .. c_n
  int node_count = 0;
  /// Set when the gamma root is rational; W and the coefficients are then
  /// exact as well.
  std::optional<Rational> gamma_exact;
  std::optional<Rational> W_exact;
  std::optional<std::vector<Rational>> coeffs_exact;

  double gamma_value() const { return static_cast<double>(gamma); }
  double W_value() const { return static_cast<double>(W); }
  std::vector<double> coeffs_double() const {
    std::vector<double> out;
    out.reserve(coeffs.size());
    for (const auto& v : coeffs) out.push_back(static_cast<double>(v));
    return out;
  }
};

/// All positive-root solutions for (n, s, Z) plus counts of the roots that
/// were excluded.
struct QsSolutionSet {
  int n = 0;
  int s = 0;
  Rational Z;
  TerminationPolynomial polynomial;
  std::vector<QsSolution> solutions;  // gamma descending
  int complex_roots = 0;
  int nonpositive_roots = 0;
  int repeated_roots = 0;  // degree lost to multiplicity
  std::vector<std::string> diagnostics;
};

/// W = gamma (n+s+1)/2.
template <typename T>
T qs_W(const T& gamma, int n, int s) {
  return gamma * T(n + s + 1) / T(2);
}

inline int count_nodes(const QsSolution& solution);

namespace detail {

inline Rational two_pow(int e) {
  if (e >= 0) return Rational(BigInt(1) << e);
  return Rational(1) / Rational(BigInt(1) << -e);
}

// Polishes an isolating interval of a positive root until its relative width
// is below 2^-(digits+8) of the high-precision type.
inline RootInterval<Rational> polish_positive_root(const Polynomial<Rational>& p, RootInterval<Rational> ri) {
  while (!ri.exact && (ri.lo == 0 || ri.hi - ri.lo > ri.hi / 4)) ri = refine_root(p, ri, (ri.hi - ri.lo) / 2);
  if (ri.exact) return ri;
  const Rational width = ri.lo * two_pow(-(std::numeric_limits<HighPrecision>::digits + 8));
  return refine_root(p, ri, width);
}

}  // namespace detail

inline QsSolutionSet qs_solutions(int n, int s, const Rational& Z) {
  require(n >= 1, "qs_solutions needs n >= 1");
  require(Z > 0, "qs_solutions needs Z > 0");
  QsSolutionSet out;
  out.n = n;
  out.s = s;
  out.Z = Z;
  out.polynomial = termination_polynomial(n, s, Z);
  const auto& p = out.polynomial.coeffs;

  const auto g = polynomial_gcd(p, p.derivative());
  const Polynomial<Rational> sqfree = p.divmod(g).first.monic();
  out.repeated_roots = p.degree() - sqfree.degree();
  if (out.repeated_roots > 0) {
    out.diagnostics.push_back("termination polynomial has repeated roots; multiplicity collapsed");
  }

  const auto sturm = sturm_chain(sqfree);
  const int real = sturm.count_real();
  const int positive = sturm.count_above(Rational(0));
  out.complex_roots = sqfree.degree() - real;
  out.nonpositive_roots = real - positive;
  if (out.complex_roots > 0) {
    std::ostringstream msg;
    msg << out.complex_roots << " complex root(s) of the termination polynomial excluded";
    out.diagnostics.push_back(msg.str());
  }
  if (out.nonpositive_roots > 0) {
    std::ostringstream msg;
    msg << out.nonpositive_roots << " non-positive root(s) of the termination polynomial excluded";
    out.diagnostics.push_back(msg.str());
  }
  if (positive == 0) return out;

  const Rational bound = cauchy_root_bound(sqfree);
  auto intervals = isolate_roots(sqfree, sturm, Rational(0), bound);
  for (auto it = intervals.rbegin(); it != intervals.rend(); ++it) {
    auto ri = detail::polish_positive_root(sqfree, *it);
    QsSolution sol;
    sol.n = n;
    sol.s = s;
    sol.Z = Z;
    sol.index = static_cast<int>(out.solutions.size()) + 1;

    std::optional<Rational> exact = ri.exact;
    if (!exact) {
      const Rational candidate = simplest_rational_between(ri.lo, ri.hi);
      if (sqfree(candidate) == 0) exact = candidate;
    }
    if (exact) {
      sol.gamma_exact = *exact;
      sol.W_exact = qs_W(*exact, n, s);
      auto ce = ttrr_coefficients<Rational>(Z, s, *exact, *sol.W_exact, n);
      sol.coeffs_exact = ce;
      sol.gamma = from_rational<HighPrecision>(*exact);
    } else {
      sol.gamma = from_rational<HighPrecision>((ri.lo + ri.hi) / 2);
    }
    sol.W = qs_W(sol.gamma, n, s);
    if (sol.coeffs_exact) {
      for (const auto& v : *sol.coeffs_exact) sol.coeffs.push_back(from_rational<HighPrecision>(v));
    } else {
      sol.coeffs = ttrr_coefficients<HighPrecision>(from_rational<HighPrecision>(Z), s, sol.gamma, sol.W, n);
    }
    sol.node_count = count_nodes(sol);
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

/// Number of distinct roots of sum_j c_j r^j on (0, inf). Rational solutions
/// are counted exactly; otherwise a quad-precision Sturm chain is used and
/// rejected if it cannot certify simple roots.
inline int count_nodes(const QsSolution& solution) {
  require(!solution.coeffs.empty(), "solution has no coefficients");
  if (solution.coeffs_exact) {
    const Polynomial<Rational> p(*solution.coeffs_exact);
    if (p.degree() != solution.n) throw NumericalError("leading coefficient c_n vanishes");
    const auto sturm = sturm_chain(p);
    if (!sturm.squarefree) throw NumericalError("node polynomial has a multiple root");
    return sturm.count_above(Rational(0));
  }
  const Polynomial<HighPrecision> p(solution.coeffs);
  if (p.degree() != solution.n) throw NumericalError("leading coefficient c_n vanishes");
  const HighPrecision zero_tol = std::numeric_limits<HighPrecision>::epsilon() * HighPrecision(1e6);
  const auto sturm = sturm_chain(p, zero_tol);
  if (!sturm.squarefree) {
    throw NumericalError("node count not certified: Sturm chain suggests a multiple root at working precision");
  }
  return sturm.count_above(HighPrecision(0));
}

/// R(r) = r^s exp(-gamma r^2/4) sum_j c_j r^j with c_0 = 1.
template <typename Real = double>
Real qs_wavefunction(const QsSolution& solution, const Real& r) {
  require(r >= Real(0), "qs_wavefunction needs r >= 0");
  const Real gamma = static_cast<Real>(solution.gamma);
  Real poly(0);
  for (auto it = solution.coeffs.rbegin(); it != solution.coeffs.rend(); ++it) poly = poly * r + static_cast<Real>(*it);
  using std::exp;
  using std::pow;
  const Real rs = solution.s == 0 ? Real(1) : Real(pow(r, solution.s));
  return rs * exp(-gamma * r * r / Real(4)) * poly;
}

/// max over samples of |(H - W) R| / (|W| |R| + floor), with the floor the sum
/// of magnitudes of the individual operator terms at that point. Derivatives
/// are taken analytically.
template <typename Real = double>
Real residual_check(const QsSolution& solution, const std::vector<Real>& sample_points) {
  using std::abs;
  using std::exp;
  using std::pow;
  const Real gamma = static_cast<Real>(solution.gamma);
  const Real W = static_cast<Real>(solution.W);
  const Real Z = from_rational<Real>(solution.Z);
  const int s = solution.s;
  const Real m2 = Real(s * s);
  Real worst(0);
  for (const Real& r : sample_points) {
    require(r > Real(0), "residual samples must lie in (0, inf)");
    Real P(0), dP(0), d2P(0);
    for (int j = static_cast<int>(solution.coeffs.size()) - 1; j >= 0; --j) {
      d2P = d2P * r + Real(2) * dP;
      dP = dP * r + P;
      P = P * r + static_cast<Real>(solution.coeffs[j]);
    }
    const Real rs = Real(pow(r, s));
    const Real rs1 = s >= 1 ? Real(pow(r, s - 1)) : Real(0);
    const Real rs2 = s >= 2 ? Real(pow(r, s - 2)) : Real(0);
    const Real f = rs * P;
    const Real df = Real(s) * rs1 * P + rs * dP;
    const Real d2f = Real(s * (s - 1)) * rs2 * P + Real(2 * s) * rs1 * dP + rs * d2P;
    const Real g = exp(-gamma * r * r / Real(4));
    const Real R = f * g;
    const Real dR = (df - gamma * r * f / Real(2)) * g;
    const Real d2R = (d2f - gamma * r * df + (gamma * gamma * r * r / Real(4) - gamma / Real(2)) * f) * g;
    const Real terms[] = {-d2R / Real(2), -dR / (Real(2) * r), m2 / (Real(2) * r * r) * R,
                          gamma * gamma * r * r / Real(8) * R, -Z / r * R};
    Real sum = -W * R;
    Real floor(0);
    for (const auto& t : terms) {
      sum += t;
      floor += abs(t);
    }
    const Real denom = abs(W) * abs(R) + floor;
    if (denom > Real(0)) worst = std::max(worst, Real(abs(sum) / denom));
  }
  return worst;
}

}  // namespace qsmag
