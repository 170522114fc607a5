#include "qsmag/commands.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

using namespace qsmag;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QSMAG_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

double cell(const Table& t, std::size_t row, const std::string& column) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == column) return t.rows.at(row).at(c).value();
  }
  throw std::runtime_error("no column " + column);
}

}  // namespace

TEST(Cli, QsRows) {
  const auto one = run("qs --n 1 --s 0 --Z 1");
  ASSERT_EQ(one.status, 0);
  const auto rec = parse_csv(one.out);
  const auto& t = rec.table("solutions");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(cell(t, 0, "gamma"), 4.0);
  EXPECT_EQ(cell(t, 0, "W"), 4.0);
  EXPECT_EQ(cell(t, 0, "nodes"), 1.0);

  const auto two = parse_csv(run("qs --n 2 --s 0 --Z 1").out).table("solutions");
  EXPECT_EQ(cell(two, 0, "gamma"), 2.0 / 3.0);
  EXPECT_EQ(cell(two, 0, "W"), 1.0);
  EXPECT_EQ(cell(two, 0, "nodes"), 2.0);

  const auto zero = run("qs --n 0 --s 0 --Z 1");
  EXPECT_EQ(zero.status, 0);
  const auto zr = parse_csv(zero.out);
  EXPECT_TRUE(zr.table("solutions").rows.empty());
  ASSERT_EQ(zr.diagnostics.size(), 1u);
  EXPECT_NE(zr.diagnostics[0].find("no QS solution"), std::string::npos);
}

TEST(Cli, RrmTables) {
  const auto r = run("rrm --gamma 4 --Z 1 --s 0 --basis gaussian --N 4..7 --levels 4");
  ASSERT_EQ(r.status, 0);
  const auto t = parse_csv(r.out).table("convergence");
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_NEAR(cell(t, 3, "W0"), -1.459560848, 1e-9);
  EXPECT_NEAR(cell(t, 3, "W3"), 12.53290257, 1e-8);

  const auto t2 = parse_csv(run("rrm --gamma 0.6666666667 --basis gaussian --N 4..7 --levels 4").out)
                      .table("convergence");
  EXPECT_NEAR(cell(t2, 0, "W2"), 1.0, 1e-9);

  const auto ho = parse_csv(run("rrm --gamma 4 --Z 0 --s 0 --N 6 --levels 3").out).table("convergence");
  EXPECT_NEAR(cell(ho, 0, "W0"), 2.0, 1e-12);
  EXPECT_NEAR(cell(ho, 0, "W1"), 6.0, 1e-12);
  EXPECT_NEAR(cell(ho, 0, "W2"), 10.0, 1e-12);
}

TEST(Cli, CriticalTableAndScaling) {
  const auto r = run("critical --nu-max 3 --s 0 --Z 1 --tol 1e-9");
  ASSERT_EQ(r.status, 0);
  const auto t = parse_csv(r.out).table("critical");
  const double ref[] = {9.399451214, 0.4484067794, 0.09870506669, 0.03616422276};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(cell(t, k, "gamma_c") / ref[k], 1.0, 1e-6) << k;
  const auto z2 = parse_csv(run("critical --nu-max 0 --s 0 --Z 2").out).table("critical");
  EXPECT_NEAR(cell(z2, 0, "gamma_c") / (4 * cell(t, 0, "gamma_c")), 1.0, 1e-8);
}

TEST(Cli, OracleLimits) {
  const auto h = parse_csv(run("oracle --Z 1 --gamma 0 --s 0 --levels 2").out).table("levels");
  EXPECT_NEAR(cell(h, 0, "W"), -2.0, 1e-5);
  EXPECT_NEAR(cell(h, 1, "W"), -2.0 / 9.0, 1e-5);
  const auto o = parse_csv(run("oracle --Z 0 --gamma 2 --s 1 --levels 1").out).table("levels");
  EXPECT_NEAR(cell(o, 0, "W"), 2.0, 1e-6);
  const auto s = parse_csv(run("oracle --Z 1 --gamma 4 --s 0 --levels 2").out).table("levels");
  EXPECT_NEAR(cell(s, 0, "W"), -1.4596, 1e-4);
  EXPECT_NEAR(cell(s, 1, "W"), 4.0, 1e-5);
}

TEST(Cli, SweepFigureData) {
  const auto r = run("sweep --gamma-min 0.2 --gamma-max 6 --points 30 --nu-max 3 --n-max 6 --s 0 --Z 1");
  ASSERT_EQ(r.status, 0);
  const auto rec = parse_csv(r.out);
  const auto& pts = rec.table("qs_points");
  bool saw_4 = false, saw_23 = false;
  for (std::size_t i = 0; i < pts.rows.size(); ++i) {
    const double g = cell(pts, i, "gamma"), W = cell(pts, i, "W"), nodes = cell(pts, i, "nodes");
    if (g == 4.0 && W == 4.0 && nodes == 1.0) saw_4 = true;
    if (std::abs(g - 2.0 / 3.0) < 1e-15 && W == 1.0 && nodes == 2.0) saw_23 = true;
    // Only the curve with nu = node count passes through a QS point.
    EXPECT_LE(cell(pts, i, "capture_error"), 1e-6) << i;
    EXPECT_GT(cell(pts, i, "other_gap"), 1e-2) << i;
  }
  EXPECT_TRUE(saw_4);
  EXPECT_TRUE(saw_23);
  EXPECT_EQ(rec.table("rrm_curves").rows.size(), 30u);

  const auto lines = parse_csv(run("sweep --gamma-min 1 --gamma-max 3 --points 3 --n-max 3").out).table("qs_lines");
  EXPECT_EQ(cell(lines, 1, "gamma"), 2.0);
  EXPECT_EQ(cell(lines, 1, "n3"), 4.0);
}

TEST(Cli, SweepIsDeterministicAcrossJobCounts) {
  const std::string args = "sweep --gamma-min 0.2 --gamma-max 6 --points 24 --nu-max 3 --n-max 6";
  const auto a = run(args + " --jobs 1");
  const auto b = run(args + " --jobs 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, run(args + " --jobs 1").out);
}

TEST(Cli, HftCheck) {
  const auto r = run("hft-check --nu-max 2 --Z 1 --gamma 4");
  ASSERT_EQ(r.status, 0);
  const auto t = parse_csv(r.out).table("hft");
  for (std::size_t k = 0; k < t.rows.size(); ++k) EXPECT_EQ(cell(t, k, "signs_ok"), 1.0);
}

TEST(Cli, JsonRoundTrip) {
  const auto r = run("rrm --gamma 4 --N 4..5 --levels 2 --format json");
  ASSERT_EQ(r.status, 0);
  const auto rec = parse_json(r.out);
  EXPECT_EQ(rec.schema_version, kSchemaVersion);
  EXPECT_EQ(rec.command, "rrm");
  EXPECT_EQ(to_json(rec), r.out);
  const auto c = run("rrm --gamma 4 --N 4..5 --levels 2");
  EXPECT_EQ(to_csv(parse_csv(c.out)), c.out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("critical --nu-max 1 --s 0 --Z -1").status, 2);
  EXPECT_EQ(run("rrm --gamma 4 --bogus").status, 2);
  EXPECT_EQ(run("rrm").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("rrm --gamma 4 --basis cubic").status, 2);
  EXPECT_EQ(run("rrm --gamma 4 --N 7..4").status, 2);
  EXPECT_EQ(run("qs --n 1 --Z 1/0").status, 2);
  EXPECT_EQ(run("oracle --Z 0 --gamma 0").status, 2);
  EXPECT_EQ(run("rrm --gamma 4 --basis gaussian --N 60").status, 1);
  EXPECT_EQ(run("critical --nu-max 0 --Z 1 --tol 1e-9 --N-max 1").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Commands, RationalAndRangeParsing) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("0.5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-1.5e-1"), Rational(-3, 20));
  EXPECT_EQ(parse_rational("2"), Rational(2));
  EXPECT_THROW(parse_rational("abc"), DomainError);
  EXPECT_THROW(parse_rational("1.2.3"), DomainError);
  EXPECT_EQ(parse_N_range("4..7"), std::make_pair(4, 7));
  EXPECT_EQ(parse_N_range("6"), std::make_pair(6, 6));
  EXPECT_THROW(parse_N_range("4..x"), DomainError);
}
