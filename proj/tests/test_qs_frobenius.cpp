#include "qsmag/oracle.hpp"
#include "qsmag/qs_frobenius.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

using namespace qsmag;

namespace {

int ceil_half(int n) { return (n + 1) / 2; }

}  // namespace

TEST(Ttrr, SeedsAndZeroChargeParity) {
  const auto c = ttrr_coefficients<double>(1.0, 0, 4.0, 4.0, 4);
  EXPECT_DOUBLE_EQ(c[0], 1.0);
  EXPECT_DOUBLE_EQ(c[1], -2.0);
  const auto odd = ttrr_coefficients<double>(0.0, 1, 2.0, 3.0, 9);
  for (std::size_t j = 1; j < odd.size(); j += 2) EXPECT_EQ(odd[j], 0.0) << j;
  const auto viaParams = ttrr_coefficients(ModelParams(1.0, 4.0, 0), 4.0, 4);
  EXPECT_EQ(viaParams, c);
}

TEST(Termination, LowOrderSolutions) {
  const auto one = qs_solutions(1, 0, Rational(1));
  ASSERT_EQ(one.solutions.size(), 1u);
  EXPECT_EQ(*one.solutions[0].gamma_exact, Rational(4));
  EXPECT_EQ(*one.solutions[0].W_exact, Rational(4));
  EXPECT_EQ(one.solutions[0].node_count, 1);

  const auto two = qs_solutions(2, 0, Rational(1));
  ASSERT_EQ(two.solutions.size(), 1u);
  EXPECT_EQ(*two.solutions[0].gamma_exact, Rational(2, 3));
  EXPECT_EQ(*two.solutions[0].W_exact, Rational(1));
  EXPECT_EQ(two.solutions[0].node_count, 2);
}

TEST(Termination, NoSolutionAtZeroDegree) {
  try {
    termination_polynomial(0, 0, Rational(1));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("no QS solution"), std::string::npos);
  }
}

TEST(Termination, ClosedFormsAcrossChargesAndS) {
  for (int s = 0; s <= 4; ++s) {
    for (const Rational Z : {Rational(1, 2), Rational(1), Rational(2)}) {
      const auto one = qs_solutions(1, s, Z);
      ASSERT_EQ(one.solutions.size(), 1u);
      EXPECT_EQ(*one.solutions[0].gamma_exact, 4 * Z * Z / (2 * s + 1));
      EXPECT_EQ(*one.solutions[0].W_exact, 2 * (s + 2) * Z * Z / (2 * s + 1));
      const auto two = qs_solutions(2, s, Z);
      ASSERT_EQ(two.solutions.size(), 1u);
      EXPECT_EQ(*two.solutions[0].gamma_exact, 2 * Z * Z / (4 * s + 3));
      EXPECT_EQ(*two.solutions[0].W_exact, Z * Z * (s + 3) / (4 * s + 3));
    }
  }
}

TEST(Termination, DegreeLaw) {
  for (int s = 0; s <= 3; ++s) {
    for (int n = 1; n <= 10; ++n) {
      EXPECT_EQ(termination_polynomial(n, s, Rational(1)).degree, ceil_half(n)) << "n=" << n << " s=" << s;
    }
  }
}

TEST(Termination, ChargeScalingIsExact) {
  // c_{n+1} depends on gamma only through gamma/Z^2.
  for (int n = 1; n <= 6; ++n) {
    const auto p1 = termination_polynomial(n, 0, Rational(1)).coeffs;
    const auto p2 = termination_polynomial(n, 0, Rational(2)).coeffs;
    const auto scaled = p1.rescaled(Rational(1, 4));  // p1(x/4)
    const Rational ratio = p2.leading() / scaled.leading();
    auto expected = scaled;
    expected *= ratio;
    EXPECT_EQ(p2, expected) << n;
  }
}

TEST(Termination, TruncationIdentity) {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& sol : qs_solutions(n, 0, Rational(1)).solutions) {
      const auto c = ttrr_coefficients<HighPrecision>(HighPrecision(1), 0, sol.gamma, sol.W, n + 2);
      const HighPrecision scale = abs(c[n]);
      EXPECT_LT(static_cast<double>(abs(c[n + 1]) / scale), 1e-25) << n;
      EXPECT_LT(static_cast<double>(abs(c[n + 2]) / scale), 1e-25) << n;
    }
  }
  const auto sol = qs_solutions(2, 1, Rational(1)).solutions.at(0);
  const auto exact = ttrr_coefficients<Rational>(Rational(1), 1, *sol.gamma_exact, *sol.W_exact, 4);
  EXPECT_EQ(exact[3], Rational(0));
  EXPECT_EQ(exact[4], Rational(0));
}

TEST(Termination, RootsAreRealPositiveAndOrdered) {
  for (int n = 1; n <= 10; ++n) {
    const auto set = qs_solutions(n, 0, Rational(1));
    EXPECT_EQ(set.complex_roots, 0) << n;
    EXPECT_EQ(static_cast<int>(set.solutions.size()) + set.nonpositive_roots, set.polynomial.degree) << n;
    for (std::size_t k = 1; k < set.solutions.size(); ++k) {
      EXPECT_GT(set.solutions[k - 1].gamma, set.solutions[k].gamma);
    }
  }
}

TEST(Termination, NodeCountMatchesSignChanges) {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& sol : qs_solutions(n, 0, Rational(1)).solutions) {
      // Sign of the polynomial factor on a fine grid; the Gaussian factor
      // underflows long before the last node at weak field.
      const auto c = sol.coeffs_double();
      auto poly = [&](double r) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
        return acc;
      };
      EXPECT_GT(qs_wavefunction<double>(sol, 0.1) * poly(0.1), 0.0);
      int changes = 0;
      double prev = poly(0.0);
      for (int k = 1; k <= 100000; ++k) {
        const double r = k * 0.001;
        const double v = poly(r);
        if ((v < 0) != (prev < 0)) ++changes;
        prev = v;
      }
      EXPECT_EQ(changes, sol.node_count) << "n=" << n << " i=" << sol.index;
      EXPECT_LE(sol.node_count, n);
    }
  }
}

TEST(Residual, ExactSolutionsSatisfyTheEquation) {
  std::vector<double> r;
  for (int k = 1; k <= 40; ++k) r.push_back(0.1 * k);
  for (int n = 1; n <= 8; ++n) {
    for (const auto& sol : qs_solutions(n, 0, Rational(1)).solutions) {
      EXPECT_LE(residual_check<double>(sol, r), 1e-10) << "n=" << n << " i=" << sol.index;
    }
  }
}

TEST(Residual, PerturbedFieldIsDetected) {
  std::vector<double> r;
  for (int k = 1; k <= 40; ++k) r.push_back(0.1 * k);
  auto sol = qs_solutions(3, 0, Rational(1)).solutions.at(0);
  sol.gamma *= HighPrecision(1.01);
  sol.W = qs_W(sol.gamma, sol.n, sol.s);
  sol.gamma_exact.reset();
  sol.W_exact.reset();
  sol.coeffs_exact.reset();
  EXPECT_GT(residual_check<double>(sol, r), 1e-3);
}

TEST(OracleAgreement, QsLevelsAppearAtNodeIndex) {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& sol : qs_solutions(n, 0, Rational(1)).solutions) {
      const ModelParams p(1.0, sol.gamma_value(), 0);
      const auto res = oracle_solve(p, std::nullopt, sol.node_count + 2);
      EXPECT_NEAR(res.W[sol.node_count], sol.W_value(), 1e-5) << "n=" << n << " i=" << sol.index;
    }
  }
}
