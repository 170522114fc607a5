#include "qsmag/oracle.hpp"
#include "qsmag/ritz.hpp"

#include <gtest/gtest.h>

using namespace qsmag;

TEST(Oracle, HydrogenicLimit) {
  const auto r = oracle_solve(ModelParams(1.0, 0.0, 0), std::nullopt, 2);
  EXPECT_NEAR(r.W[0], -2.0, 1e-6);
  EXPECT_NEAR(r.W[1], -2.0 / 9.0, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(Oracle, OscillatorLimit) {
  const auto r = oracle_solve(ModelParams(0.0, 4.0, 0), std::nullopt, 2);
  EXPECT_NEAR(r.W[0], 2.0, 1e-6);
  EXPECT_NEAR(r.W[1], 6.0, 1e-6);
  const auto r1 = oracle_solve(ModelParams(0.0, 2.0, 1), std::nullopt, 1);
  EXPECT_NEAR(r1.W[0], 2.0, 1e-6);
}

TEST(Oracle, StrongField) {
  const auto r = oracle_solve(ModelParams(1.0, 4.0, 0), std::nullopt, 2);
  EXPECT_NEAR(r.W[0], -1.4595, 2e-4);
  EXPECT_NEAR(r.W[1], 4.0, 1e-5);
}

TEST(Oracle, AgreesWithRitz) {
  for (double g : {2.0 / 3.0, 1.0, 4.0}) {
    const ModelParams p(1.0, g, 0);
    const auto ritz = rrm_spectrum<HighPrecision>(BasisSpec::gaussian(24, 0, g), p).W_double();
    const auto r = oracle_solve(p, std::nullopt, 3);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(r.W[k], ritz[k], 1e-5) << "gamma=" << g << " k=" << k;
  }
}

TEST(Oracle, SecondOrderGridConvergence) {
  const ModelParams p(0.0, 4.0, 0);
  const double r_max = 12.0;
  const double e1 = oracle_raw(p, r_max, 400, 1)[0] - 2.0;
  const double e2 = oracle_raw(p, r_max, 800, 1)[0] - 2.0;
  const double e3 = oracle_raw(p, r_max, 1600, 1)[0] - 2.0;
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
  EXPECT_NEAR(e2 / e3, 4.0, 0.2);
  const ModelParams q(1.0, 4.0, 0);
  const double exact = 4.0;
  const double f1 = oracle_raw(q, r_max, 400, 2)[1] - exact;
  const double f2 = oracle_raw(q, r_max, 800, 2)[1] - exact;
  EXPECT_NEAR(f1 / f2, 4.0, 0.3);
}

TEST(Oracle, FlagsUnconvergedExtrapolation) {
  const auto r = oracle_solve(ModelParams(1.0, 1.0, 0), GridSpec{20.0, 100}, 2, 1e-9);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.diagnostics.size(), 2u);
  EXPECT_NE(r.W_coarse[0], r.W_fine[0]);
}

TEST(Oracle, AutomaticDomain) {
  const auto g = auto_grid(ModelParams(1.0, 4.0, 0), 3);
  EXPECT_LT(std::exp(-4.0 * g.r_max * g.r_max / 4), 1e-12);
  const auto h = auto_grid(ModelParams(1.0, 0.0, 0), 1);
  EXPECT_LT(std::exp(-h.r_max), 1e-10);
  EXPECT_GE(h.n_points, 100);
}

TEST(Oracle, ValidatesInputs) {
  EXPECT_THROW(oracle_solve(ModelParams(0.0, 0.0, 0), std::nullopt, 1), DomainError);
  EXPECT_THROW(oracle_solve(ModelParams(1.0, 1.0, 0), std::nullopt, 0), DomainError);
  EXPECT_THROW(oracle_solve(ModelParams(1.0, 1.0, 0), GridSpec{10.0, 50}, 1), DomainError);
  EXPECT_THROW(oracle_solve(ModelParams(1.0, 1.0, 0), GridSpec{-1.0, 500}, 1), DomainError);
}
