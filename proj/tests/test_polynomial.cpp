#include "qsmag/polynomial.hpp"

#include <gtest/gtest.h>

using namespace qsmag;
using P = Polynomial<Rational>;

namespace {

P from_ints(std::initializer_list<int> c) {
  std::vector<Rational> v;
  for (int x : c) v.emplace_back(x);
  return P(v);
}

}  // namespace

TEST(Polynomial, ArithmeticAndEvaluation) {
  const P a = from_ints({-1, 1});  // x - 1
  const P b = from_ints({-2, 1});  // x - 2
  const P prod = a * b;
  EXPECT_EQ(prod.degree(), 2);
  EXPECT_EQ(prod(Rational(3)), Rational(2));
  EXPECT_EQ((prod - prod).degree(), -1);
  EXPECT_EQ((a + b).coefficient(0), Rational(-3));
  EXPECT_EQ(prod.derivative(), from_ints({-3, 2}));
}

TEST(Polynomial, DivmodAndGcd) {
  const P a = from_ints({-1, 1}), b = from_ints({-2, 1}), c = from_ints({1, 1});
  const P p = a * a * b;
  const auto [q, r] = p.divmod(a * c);
  EXPECT_EQ(q * (a * c) + r, p);
  EXPECT_LT(r.degree(), 2);
  EXPECT_EQ(polynomial_gcd(p, p.derivative()), a);
  EXPECT_EQ(polynomial_gcd(a * c, b * c), c);
}

TEST(Sturm, CountsRealRoots) {
  EXPECT_EQ(sturm_chain(from_ints({-2, 0, 1})).count_real(), 2);
  EXPECT_EQ(sturm_chain(from_ints({1, 0, 1})).count_real(), 0);
  const P cubic = from_ints({-1, 1}) * from_ints({-2, 1}) * from_ints({3, 1});
  const auto chain = sturm_chain(cubic);
  EXPECT_EQ(chain.count_real(), 3);
  EXPECT_EQ(chain.count_above(Rational(0)), 2);
  EXPECT_EQ(chain.count_in(Rational(0), Rational(1)), 1);  // (0, 1] holds the root at 1
  EXPECT_TRUE(chain.squarefree);
  EXPECT_FALSE(sturm_chain(from_ints({-1, 1}) * from_ints({-1, 1})).squarefree);
}

TEST(Sturm, FloatingChainWithTolerance) {
  const Polynomial<double> p(std::vector<double>{2.0, -3.0, 1.0});
  EXPECT_EQ(sturm_chain(p, 1e-12).count_real(), 2);
}

TEST(RootIsolation, SeparatesAndRefines) {
  const P cubic = from_ints({-1, 1}) * from_ints({-2, 1}) * from_ints({-3, 1});
  const auto chain = sturm_chain(cubic);
  const auto roots = isolate_roots(cubic, chain, Rational(0), cauchy_root_bound(cubic));
  ASSERT_EQ(roots.size(), 3u);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto r = refine_root(cubic, roots[k], Rational(1, 1000000));
    const Rational expected(static_cast<int>(k) + 1);
    EXPECT_TRUE(r.lo < expected || r.exact);
    EXPECT_LE(expected, r.hi);
  }
}

TEST(RootIsolation, IrrationalRoot) {
  const P p = from_ints({-2, 0, 1});
  const auto roots = isolate_roots(p, sturm_chain(p), Rational(0), Rational(2));
  ASSERT_EQ(roots.size(), 1u);
  const auto r = refine_root(p, roots[0], Rational(1, BigInt(1) << 60));
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(static_cast<double>(r.lo), std::sqrt(2.0), 1e-15);
}

TEST(RootIsolation, CauchyBound) {
  const P p = from_ints({-6, 1, 1});  // roots 2, -3
  EXPECT_GT(cauchy_root_bound(p), Rational(3));
}

TEST(SimplestRational, SternBrocot) {
  EXPECT_EQ(simplest_rational_between(Rational(3, 10), Rational(4, 10)), Rational(1, 3));
  EXPECT_EQ(simplest_rational_between(Rational(66, 100), Rational(67, 100)), Rational(2, 3));
  EXPECT_EQ(simplest_rational_between(Rational(7, 2), Rational(9, 2)), Rational(4));
  EXPECT_EQ(simplest_rational_between(Rational(5), Rational(5)), Rational(5));
}
