#pragma once

// One function per CLI subcommand. Each validates its inputs, runs the
// computation and returns an OutputRecord; formatting and exit codes are the
// caller's business.

#include "qsmag/critical.hpp"
#include "qsmag/error.hpp"
#include "qsmag/model.hpp"
#include "qsmag/oracle.hpp"
#include "qsmag/output.hpp"
#include "qsmag/parallel.hpp"
#include "qsmag/precision.hpp"
#include "qsmag/qs_frobenius.hpp"
#include "qsmag/ritz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qsmag {

inline BasisPolicy parse_basis_policy(const std::string& text) {
  if (text == "auto") return BasisPolicy::Auto;
  if (text == "gaussian") return BasisPolicy::Gaussian;
  if (text == "exponential") return BasisPolicy::Exponential;
  throw DomainError("unknown basis '" + text + "' (expected gaussian, exponential or auto)");
}

inline Precision parse_precision(const std::string& text) {
  if (text == "double") return Precision::Double;
  if (text == "high") return Precision::High;
  throw DomainError("unknown precision '" + text + "' (expected double or high)");
}

/// "6" or "4..7".
inline std::pair<int, int> parse_N_range(const std::string& text) {
  auto to_int = [&](const std::string& part) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (...) {
      throw DomainError("bad basis size range '" + text + "'");
    }
    if (used != part.size()) throw DomainError("bad basis size range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  const int lo = to_int(dots == std::string::npos ? text : text.substr(0, dots));
  const int hi = dots == std::string::npos ? lo : to_int(text.substr(dots + 2));
  require(lo >= 1 && hi >= lo, "basis size range must satisfy 1 <= N_min <= N_max");
  return {lo, hi};
}

namespace detail {

inline std::string num(double v) {
  auto s = format_number(v);
  return s.empty() ? "nan" : s;
}

inline BasisKind resolve_kind(BasisPolicy policy, double gamma) {
  switch (policy) {
    case BasisPolicy::Gaussian: return BasisKind::GaussianMonomial;
    case BasisPolicy::Exponential: return BasisKind::ExponentialMonomial;
    case BasisPolicy::Auto: break;
  }
  return choose_basis_kind(gamma);
}

// Natural inverse length for the exponential weight.
inline double alpha_scale(const ModelParams& p) { return std::max(p.Z(), std::sqrt(p.gamma())); }

/// Lowest `levels` Ritz values at one point. With an exponential basis each
/// level gets its own variationally optimal alpha.
template <typename Real>
std::vector<double> ritz_levels(const ModelParams& params, int levels, int N, BasisKind kind) {
  if (kind == BasisKind::GaussianMonomial) {
    auto w = rrm_spectrum<Real>(BasisSpec::gaussian(N, params.s(), params.gamma()), params).W_double();
    w.resize(static_cast<std::size_t>(levels));
    return w;
  }
  std::vector<double> out;
  const double scale = alpha_scale(params);
  for (int nu = 0; nu < levels; ++nu) {
    const double alpha = optimize_alpha<Real>(params, N, nu, 0.02 * scale, 4.0 * scale, 80);
    out.push_back(static_cast<double>(rrm_spectrum<Real>(BasisSpec::exponential(N, params.s(), alpha), params).W[nu]));
  }
  return out;
}

inline std::vector<double> ritz_levels(Precision precision, const ModelParams& params, int levels, int N,
                                       BasisKind kind) {
  return precision == Precision::High ? ritz_levels<HighPrecision>(params, levels, N, kind)
                                      : ritz_levels<double>(params, levels, N, kind);
}

inline double parse_real(const std::string& text) { return static_cast<double>(parse_rational(text)); }

}  // namespace detail

// ---------------------------------------------------------------- qs

struct QsArgs {
  int n = 1;
  int s = 0;
  std::string Z = "1";
};

inline OutputRecord cmd_qs(const QsArgs& args) {
  require(args.n >= 0, "n must be >= 0");
  require(args.s >= 0, "s must be >= 0");
  const Rational Z = parse_rational(args.Z);
  OutputRecord rec;
  rec.command = "qs";
  rec.inputs = {{"n", std::to_string(args.n)}, {"s", std::to_string(args.s)}, {"Z", to_string(Z)}};
  Table sols{"solutions", {"index", "gamma", "W", "nodes"}, {}};
  Table coeffs{"coefficients", {"index", "j", "c"}, {}};
  if (args.n == 0) {
    if (Z == 0) {
      rec.diagnostics.push_back("n=0 with Z=0 is the pure oscillator: every gamma > 0 gives W = gamma(s+1)/2");
    } else {
      rec.diagnostics.push_back("no QS solution at n=0: c_1 = 0 forces Z = 0");
    }
    rec.tables = {sols, coeffs};
    return rec;
  }
  const auto set = qs_solutions(args.n, args.s, Z);
  rec.diagnostics = set.diagnostics;
  if (set.solutions.empty()) rec.diagnostics.push_back("no QS solution with gamma > 0");
  for (const auto& sol : set.solutions) {
    sols.add_row({double(sol.index), sol.gamma_value(), sol.W_value(), double(sol.node_count)});
    const auto c = sol.coeffs_double();
    for (std::size_t j = 0; j < c.size(); ++j) coeffs.add_row({double(sol.index), double(j), c[j]});
    if (sol.gamma_exact) {
      rec.diagnostics.push_back("solution " + std::to_string(sol.index) + ": gamma = " + to_string(*sol.gamma_exact) +
                                ", W = " + to_string(*sol.W_exact) + " exactly");
    }
  }
  rec.tables = {sols, coeffs};
  return rec;
}

// ---------------------------------------------------------------- rrm

struct RrmArgs {
  std::string gamma = "4";
  std::string Z = "1";
  int s = 0;
  BasisPolicy basis = BasisPolicy::Auto;
  double alpha = 1.0;
  int N_min = 4;
  int N_max = 7;
  std::optional<int> levels;  // default min(4, N_min)
  Precision precision = Precision::Double;
};

inline OutputRecord cmd_rrm(const RrmArgs& args) {
  const ModelParams params(detail::parse_real(args.Z), detail::parse_real(args.gamma), args.s);
  require(args.s >= 0, "s must be >= 0");
  const int levels = args.levels.value_or(std::min(4, args.N_min));
  const BasisFamily family{detail::resolve_kind(args.basis, params.gamma()), args.alpha};
  family.at(args.N_min, params).validate();

  const auto table = args.precision == Precision::High
                         ? converge_spectrum<HighPrecision>(params, family, args.N_min, args.N_max, levels)
                         : converge_spectrum<double>(params, family, args.N_min, args.N_max, levels);
  if (table.N.empty()) {
    throw NumericalError(table.diagnostics.empty() ? "no basis size could be solved" : table.diagnostics.front());
  }

  OutputRecord rec;
  rec.command = "rrm";
  rec.inputs = {{"gamma", detail::num(params.gamma())},
                {"Z", detail::num(params.Z())},
                {"s", std::to_string(args.s)},
                {"basis", to_string(family.kind)},
                {"alpha", family.kind == BasisKind::ExponentialMonomial ? detail::num(args.alpha) : ""},
                {"N", std::to_string(args.N_min) + ".." + std::to_string(args.N_max)},
                {"levels", std::to_string(levels)},
                {"precision", std::string(to_string(args.precision))}};
  Table t{"convergence", {"N"}, {}};
  for (int k = 0; k < levels; ++k) t.columns.push_back("W" + std::to_string(k));
  for (int k = 0; k < levels; ++k) t.columns.push_back("dW" + std::to_string(k));
  for (std::size_t r = 0; r < table.N.size(); ++r) {
    std::vector<Cell> row{double(table.N[r])};
    for (double w : table.W[r]) row.emplace_back(w);
    for (double d : table.cauchy[r]) row.emplace_back(std::isfinite(d) ? Cell(d) : std::nullopt);
    t.add_row(std::move(row));
  }
  rec.tables.push_back(std::move(t));
  rec.diagnostics = table.diagnostics;
  return rec;
}

// ---------------------------------------------------------------- critical

struct CriticalArgs {
  int nu_max = 3;
  int s = 0;
  std::string Z = "1";
  double tol = 1e-10;
  BasisPolicy basis = BasisPolicy::Auto;
  int N_max = 0;
  Precision precision = Precision::Double;
  unsigned jobs = 1;
};

inline OutputRecord cmd_critical(const CriticalArgs& args) {
  const double Z = detail::parse_real(args.Z);
  require(Z > 0.0, "critical requires Z > 0");
  require(args.tol > 0.0, "critical requires tol > 0");
  require(args.s >= 0 && args.nu_max >= 0, "critical requires s >= 0 and nu-max >= 0");
  CriticalOptions opt;
  opt.precision = args.precision;
  opt.basis = args.basis;
  opt.N_max = args.N_max;
  const auto table = critical_table(args.nu_max, args.s, Z, args.tol, opt, args.jobs);

  OutputRecord rec;
  rec.command = "critical";
  rec.inputs = {{"nu_max", std::to_string(args.nu_max)},
                {"s", std::to_string(args.s)},
                {"Z", detail::num(Z)},
                {"tol", detail::num(args.tol)},
                {"basis", to_string(args.basis)},
                {"N_max", std::to_string(args.N_max)},
                {"precision", std::string(to_string(args.precision))}};
  Table t{"critical",
          {"nu", "gamma_c", "residual", "bracket_lo", "bracket_hi", "N", "alpha", "converged", "certified"},
          {}};
  std::size_t next_row = 0, next_fail = 0;
  for (int nu = 0; nu <= args.nu_max; ++nu) {
    if (next_row < table.rows.size() && table.rows[next_row].nu == nu) {
      const auto& r = table.rows[next_row++];
      const bool expo = r.basis_used.kind == BasisKind::ExponentialMonomial;
      t.add_row({double(nu), r.gamma_c, r.residual, r.bracket.first, r.bracket.second, double(r.basis_used.N),
                 expo ? Cell(r.basis_used.alpha) : std::nullopt, r.converged ? 1.0 : 0.0, r.certified ? 1.0 : 0.0});
      for (const auto& d : r.diagnostics) rec.diagnostics.push_back("nu=" + std::to_string(nu) + ": " + d);
    } else {
      t.add_row({double(nu), {}, {}, {}, {}, {}, {}, 0.0, 0.0});
      rec.diagnostics.push_back("nu=" + std::to_string(nu) + ": " + table.failures.at(next_fail++).second);
    }
  }
  if (!table.strictly_decreasing) rec.diagnostics.push_back("critical values are not strictly decreasing in nu");
  rec.tables.push_back(std::move(t));
  return rec;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string gamma_min = "0.2";
  std::string gamma_max = "6";
  int points = 59;
  int nu_max = 3;
  int n_max = 6;
  int s = 0;
  std::string Z = "1";
  BasisPolicy basis = BasisPolicy::Auto;
  int N = 12;
  Precision precision = Precision::Double;
  unsigned jobs = 1;
};

inline OutputRecord cmd_sweep(const SweepArgs& args) {
  const double g_lo = detail::parse_real(args.gamma_min);
  const double g_hi = detail::parse_real(args.gamma_max);
  const Rational Zq = parse_rational(args.Z);
  const double Z = static_cast<double>(Zq);
  require(g_lo > 0.0 && g_hi > g_lo, "sweep requires 0 < gamma-min < gamma-max");
  require(args.points >= 2, "sweep requires points >= 2");
  require(args.nu_max >= 0 && args.n_max >= 1 && args.s >= 0, "sweep requires nu-max >= 0, n-max >= 1, s >= 0");
  require(Z >= 0.0, "sweep requires Z >= 0");
  require(args.N > args.nu_max, "basis size N must exceed nu-max");

  OutputRecord rec;
  rec.command = "sweep";
  rec.inputs = {{"gamma_min", detail::num(g_lo)},  {"gamma_max", detail::num(g_hi)},
                {"points", std::to_string(args.points)}, {"nu_max", std::to_string(args.nu_max)},
                {"n_max", std::to_string(args.n_max)},   {"s", std::to_string(args.s)},
                {"Z", to_string(Zq)},                    {"basis", to_string(args.basis)},
                {"N", std::to_string(args.N)},           {"precision", std::string(to_string(args.precision))}};

  std::vector<double> grid(static_cast<std::size_t>(args.points));
  for (int i = 0; i < args.points; ++i) grid[i] = g_lo + (g_hi - g_lo) * i / (args.points - 1);

  // (a) Ritz curves, evaluated concurrently, assembled in grid order.
  const int levels = args.nu_max + 1;
  std::vector<std::optional<std::vector<double>>> curve(grid.size());
  std::vector<std::string> failure(grid.size());
  parallel_for(grid.size(), args.jobs, [&](std::size_t i) {
    const ModelParams p(Z, grid[i], args.s);
    try {
      curve[i] = detail::ritz_levels(args.precision, p, levels, args.N, detail::resolve_kind(args.basis, grid[i]));
    } catch (const NumericalError& e) {
      failure[i] = e.what();
    }
  });
  Table curves{"rrm_curves", {"gamma"}, {}};
  for (int nu = 0; nu < levels; ++nu) curves.columns.push_back("W" + std::to_string(nu));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Cell> row{grid[i]};
    for (int nu = 0; nu < levels; ++nu) row.push_back(curve[i] ? Cell((*curve[i])[nu]) : std::nullopt);
    curves.add_row(std::move(row));
    if (!curve[i]) rec.diagnostics.push_back("gamma=" + detail::num(grid[i]) + ": " + failure[i]);
  }

  // (b) straight lines W = gamma (n+s+1)/2.
  Table lines{"qs_lines", {"gamma"}, {}};
  for (int n = 1; n <= args.n_max; ++n) lines.columns.push_back("n" + std::to_string(n));
  for (double g : grid) {
    std::vector<Cell> row{g};
    for (int n = 1; n <= args.n_max; ++n) row.emplace_back(qs_W(g, n, args.s));
    lines.add_row(std::move(row));
  }

  // (c) discrete QS points inside the window, each checked against the
  // Gaussian Ritz spectrum at its own gamma.
  Table pts{"qs_points", {"n", "index", "gamma", "W", "nodes", "W_rrm", "capture_error", "other_gap"}, {}};
  if (Z != 0.0) {
    for (int n = 1; n <= args.n_max; ++n) {
      const auto set = qs_solutions(n, args.s, Zq);
      for (const auto& sol : set.solutions) {
        const double g = sol.gamma_value();
        if (g < g_lo || g > g_hi) continue;
        const double W = sol.W_value();
        const int N = std::max({n + 1, levels, sol.node_count + 1});
        Cell w_rrm, err, gap;
        try {
          const auto w = detail::ritz_levels(args.precision, ModelParams(Z, g, args.s), N, N,
                                             BasisKind::GaussianMonomial);
          w_rrm = w[sol.node_count];
          err = std::abs(w[sol.node_count] - W);
          double best = std::numeric_limits<double>::infinity();
          for (int k = 0; k < N; ++k) {
            if (k != sol.node_count) best = std::min(best, std::abs(w[k] - W));
          }
          gap = best;
        } catch (const NumericalError& e) {
          rec.diagnostics.push_back("QS point n=" + std::to_string(n) + " gamma=" + detail::num(g) + ": " + e.what());
        }
        pts.add_row({double(n), double(sol.index), g, W, double(sol.node_count), w_rrm, err, gap});
      }
    }
  } else {
    rec.diagnostics.push_back("Z = 0: no discrete QS points (the oscillator spectrum lies on the lines)");
  }

  rec.tables = {std::move(curves), std::move(lines), std::move(pts)};
  return rec;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::string Z = "1";
  std::string gamma = "0";
  int s = 0;
  int levels = 3;
  std::optional<double> r_max;
  std::optional<int> n_points;
  double tolerance = 1e-4;
};

inline OutputRecord cmd_oracle(const OracleArgs& args) {
  require(args.s >= 0, "s must be >= 0");
  const ModelParams params(detail::parse_real(args.Z), detail::parse_real(args.gamma), args.s);
  std::optional<GridSpec> grid;
  if (args.r_max || args.n_points) {
    GridSpec g = auto_grid(params, args.levels);
    if (args.r_max) g.r_max = *args.r_max;
    if (args.n_points) g.n_points = *args.n_points;
    grid = g;
  }
  const auto res = oracle_solve(params, grid, args.levels, args.tolerance);
  OutputRecord rec;
  rec.command = "oracle";
  rec.inputs = {{"Z", detail::num(params.Z())},
                {"gamma", detail::num(params.gamma())},
                {"s", std::to_string(args.s)},
                {"levels", std::to_string(args.levels)},
                {"r_max", detail::num(res.grid.r_max)},
                {"n_points", std::to_string(res.grid.n_points)},
                {"tolerance", detail::num(args.tolerance)}};
  Table t{"levels", {"nu", "W", "W_coarse", "W_fine"}, {}};
  for (int k = 0; k < args.levels; ++k) t.add_row({double(k), res.W[k], res.W_coarse[k], res.W_fine[k]});
  rec.tables.push_back(std::move(t));
  rec.diagnostics = res.diagnostics;
  return rec;
}

// ---------------------------------------------------------------- hft-check

struct HftArgs {
  int nu_max = 3;
  int s = 0;
  std::string Z = "1";
  std::string gamma = "4";
  double step = 1e-4;
  BasisPolicy basis = BasisPolicy::Auto;
  int N = 12;
  Precision precision = Precision::Double;
};

namespace detail {

template <typename Real>
void hft_rows(const HftArgs& args, const ModelParams& params, Table& t) {
  const BasisKind kind = resolve_kind(args.basis, params.gamma());
  for (int nu = 0; nu <= args.nu_max; ++nu) {
    BasisSpec center = BasisSpec::gaussian(args.N, params.s(), params.gamma());
    if (kind == BasisKind::ExponentialMonomial) {
      const double scale = alpha_scale(params);
      center = BasisSpec::exponential(args.N, params.s(),
                                      optimize_alpha<Real>(params, args.N, nu, 0.02 * scale, 4.0 * scale, 80));
    }
    const SpectrumProvider provider = [&](const ModelParams& p) {
      BasisSpec b = center;
      if (b.kind == BasisKind::GaussianMonomial) b.gamma = p.gamma();
      return rrm_spectrum<Real>(b, p).W_double();
    };
    const auto d = hft_signs(LevelIndex(nu, params.s()), params, provider, args.step);
    const auto ex = expectation_values(rrm_spectrum<Real>(center, params), nu);
    const bool ok = d.dW_dZ < 0.0 && d.dW_dgamma > 0.0;
    t.add_row({double(nu), d.W, d.dW_dZ, -ex.inv_r, d.dW_dgamma, params.gamma() / 4.0 * ex.r2, ok ? 1.0 : 0.0});
  }
}

}  // namespace detail

inline OutputRecord cmd_hft_check(const HftArgs& args) {
  require(args.s >= 0 && args.nu_max >= 0, "hft-check requires s >= 0 and nu-max >= 0");
  require(args.N > args.nu_max, "basis size N must exceed nu-max");
  const ModelParams params(detail::parse_real(args.Z), detail::parse_real(args.gamma), args.s);
  require(params.is_physical(), "hft-check requires Z > 0 and gamma > 0");
  OutputRecord rec;
  rec.command = "hft-check";
  rec.inputs = {{"nu_max", std::to_string(args.nu_max)}, {"s", std::to_string(args.s)},
                {"Z", detail::num(params.Z())},          {"gamma", detail::num(params.gamma())},
                {"step", detail::num(args.step)},        {"basis", to_string(args.basis)},
                {"N", std::to_string(args.N)},           {"precision", std::string(to_string(args.precision))}};
  Table t{"hft", {"nu", "W", "dW_dZ", "minus_inv_r", "dW_dgamma", "gamma_r2_over_4", "signs_ok"}, {}};
  if (args.precision == Precision::High) {
    detail::hft_rows<HighPrecision>(args, params, t);
  } else {
    detail::hft_rows<double>(args, params, t);
  }
  for (const auto& row : t.rows) {
    if (row.back() != 1.0) rec.diagnostics.push_back("sign pattern violated at nu=" + format_number(row.front()));
  }
  rec.tables.push_back(std::move(t));
  return rec;
}

}  // namespace qsmag
