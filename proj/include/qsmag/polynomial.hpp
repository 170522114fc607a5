#pragma once

// Dense univariate polynomials with Sturm-sequence real-root isolation.
//
// Coefficients are stored in ascending powers. Over an exact field
// (qsmag::Rational) every operation is exact and root isolation is certified;
// over floating types the Sturm chain is built with a relative zero
// threshold and certification is reported as such.

#include "qsmag/error.hpp"
#include "qsmag/precision.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace qsmag {

template <typename T>
struct is_exact : std::false_type {};
template <>
struct is_exact<Rational> : std::true_type {};

template <typename T>
inline T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <typename T>
inline int sign_of(const T& x) {
  return (T(0) < x) - (x < T(0));
}

template <typename T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> ascending) : c_(std::move(ascending)) { trim(); }
  static Polynomial constant(const T& v) { return Polynomial(std::vector<T>{v}); }
  /// a + b x
  static Polynomial linear(const T& a, const T& b) { return Polynomial(std::vector<T>{a, b}); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; the zero polynomial reports -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coefficients() const { return c_; }
  T coefficient(int k) const { return k >= 0 && k <= degree() ? c_[k] : T(0); }
  T leading() const { return c_.empty() ? T(0) : c_.back(); }

  template <typename U = T>
  U operator()(const U& x) const {
    U acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + U(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<int>(k));
    return Polynomial(std::move(d));
  }

  /// p(scale * x)
  Polynomial rescaled(const T& scale) const {
    std::vector<T> out(c_);
    T f(1);
    for (auto& v : out) {
      v *= f;
      f *= scale;
    }
    return Polynomial(std::move(out));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Euclidean division: *this = q * divisor + r with deg r < deg divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<T> rem(c_);
    const int dd = divisor.degree();
    const int nd = degree();
    if (nd < dd) return {Polynomial{}, *this};
    std::vector<T> q(static_cast<std::size_t>(nd - dd + 1), T(0));
    const T lead = divisor.leading();
    for (int k = nd - dd; k >= 0; --k) {
      const T f = rem[k + dd] / lead;
      q[k] = f;
      for (int j = 0; j <= dd; ++j) rem[k + j] -= f * divisor.c_[j];
      rem[k + dd] = T(0);
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    Polynomial out(*this);
    const T lead = leading();
    for (auto& v : out.c_) v /= lead;
    return out;
  }

  /// Drops coefficients below `threshold` times the largest magnitude
  /// (floating types only; exact types are untouched).
  void chop(const T& threshold) {
    if constexpr (!is_exact<T>::value) {
      T scale(0);
      for (const auto& v : c_) scale = std::max(scale, abs_value(v));
      for (auto& v : c_)
        if (abs_value(v) <= threshold * scale) v = T(0);
      trim();
    }
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

template <typename T>
Polynomial<T> polynomial_gcd(Polynomial<T> a, Polynomial<T> b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Sturm chain p, p', -rem(p, p'), ... For floating T, remainders whose
/// coefficients all fall below `zero_tol` relative to the chain's scale are
/// treated as zero.
template <typename T>
struct SturmChain {
  std::vector<Polynomial<T>> chain;
  /// True when the last non-zero member is a nonzero constant, i.e. the input
  /// was (numerically) squarefree and the count is of simple roots.
  bool squarefree = false;

  int sign_changes_at(const T& x) const {
    int changes = 0;
    int prev = 0;
    for (const auto& p : chain) {
      const int sg = sign_of(p(x));
      if (sg == 0) continue;
      if (prev != 0 && sg != prev) ++changes;
      prev = sg;
    }
    return changes;
  }

  int sign_changes_at_pos_infinity() const {
    int changes = 0;
    int prev = 0;
    for (const auto& p : chain) {
      const int sg = sign_of(p.leading());
      if (prev != 0 && sg != prev) ++changes;
      prev = sg;
    }
    return changes;
  }

  int sign_changes_at_neg_infinity() const {
    int changes = 0;
    int prev = 0;
    for (const auto& p : chain) {
      int sg = sign_of(p.leading());
      if (p.degree() % 2 == 1) sg = -sg;
      if (prev != 0 && sg != prev) ++changes;
      prev = sg;
    }
    return changes;
  }

  /// Distinct real roots in (a, b].
  int count_in(const T& a, const T& b) const { return sign_changes_at(a) - sign_changes_at(b); }
  int count_real() const { return sign_changes_at_neg_infinity() - sign_changes_at_pos_infinity(); }
  /// Distinct roots in (a, +inf).
  int count_above(const T& a) const { return sign_changes_at(a) - sign_changes_at_pos_infinity(); }
};

template <typename T>
SturmChain<T> sturm_chain(const Polynomial<T>& p, const T& zero_tol = T(0)) {
  SturmChain<T> out;
  if (p.is_zero()) return out;
  auto scale_of = [](const Polynomial<T>& q) {
    T s(0);
    for (const auto& v : q.coefficients()) s = std::max(s, abs_value(v));
    return s;
  };
  // Floating members are scaled to unit max-coefficient; positive scaling
  // keeps the signs the count depends on.
  auto normalize = [&](Polynomial<T> q) {
    if constexpr (!is_exact<T>::value) {
      const T s = scale_of(q);
      if (s > T(0)) q *= T(1) / s;
    }
    return q;
  };
  Polynomial<T> a = normalize(p);
  Polynomial<T> b = p.derivative();
  out.chain.push_back(a);
  if (b.is_zero()) {
    out.squarefree = true;
    return out;
  }
  b = normalize(b);
  out.chain.push_back(b);
  while (true) {
    auto r = a.divmod(b).second;
    if constexpr (!is_exact<T>::value) {
      if (scale_of(r) <= zero_tol) r = Polynomial<T>{};
    }
    if (r.is_zero()) {
      out.squarefree = b.degree() == 0;
      return out;
    }
    r = normalize(r * T(-1));
    out.chain.push_back(r);
    a = std::move(b);
    b = std::move(r);
    if (b.degree() == 0) {
      out.squarefree = true;
      return out;
    }
  }
}

/// Cauchy bound: every root satisfies |x| < 1 + max_k |a_k / a_n|.
template <typename T>
T cauchy_root_bound(const Polynomial<T>& p) {
  T m(0);
  const T lead = abs_value(p.leading());
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, abs_value(p.coefficient(k)) / lead);
  return T(1) + m;
}

/// An isolating interval (lo, hi] holding exactly one root; `exact` is set
/// when the root was hit exactly.
template <typename T>
struct RootInterval {
  T lo;
  T hi;
  std::optional<T> exact;
};

/// Isolates the distinct roots of the squarefree polynomial `p` in (lo, hi]
/// by Sturm-count bisection. Intervals are returned in ascending order.
template <typename T>
std::vector<RootInterval<T>> isolate_roots(const Polynomial<T>& p, const SturmChain<T>& sturm, const T& lo,
                                           const T& hi, int max_depth = 400) {
  std::vector<RootInterval<T>> out;
  struct Frame {
    T lo, hi;
    int depth;
  };
  std::vector<Frame> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const int count = sturm.count_in(f.lo, f.hi);
    if (count == 0) continue;
    if (count == 1) {
      RootInterval<T> ri{f.lo, f.hi, std::nullopt};
      if (p(f.hi) == T(0)) ri.exact = f.hi;
      out.push_back(ri);
      continue;
    }
    if (f.depth >= max_depth) throw NumericalError("root isolation did not separate clustered roots");
    const T mid = (f.lo + f.hi) / T(2);
    stack.push_back({mid, f.hi, f.depth + 1});
    stack.push_back({f.lo, mid, f.depth + 1});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return out;
}

/// Shrinks an isolating interval by bisection on the sign of p until its
/// width is at most `width`.
template <typename T>
RootInterval<T> refine_root(const Polynomial<T>& p, RootInterval<T> ri, const T& width) {
  if (ri.exact) return ri;
  int s_lo = sign_of(p(ri.lo));
  while (ri.hi - ri.lo > width) {
    const T mid = (ri.lo + ri.hi) / T(2);
    const int s_mid = sign_of(p(mid));
    if (s_mid == 0) {
      ri.lo = ri.hi = mid;
      ri.exact = mid;
      return ri;
    }
    if (s_mid == s_lo) {
      ri.lo = mid;
    } else {
      ri.hi = mid;
    }
  }
  if (p(ri.hi) == T(0)) ri.exact = ri.hi;
  return ri;
}

/// The rational with the smallest denominator in the closed interval [lo, hi]
/// (Stern-Brocot descent via continued fractions). Requires 0 <= lo <= hi.
inline Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const BigInt fl = numerator(lo) / denominator(lo);  // floor for lo >= 0
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  // lo and hi share the integer part fl; recurse on reciprocals of the
  // fractional parts.
  const Rational inner = simplest_rational_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
  return Rational(fl) + Rational(1) / inner;
}

}  // namespace qsmag
