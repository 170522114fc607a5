// qsmag: command-line front end. Every subcommand prints one record (CSV by
// default, JSON with --format json) on stdout.
//
// Exit status: 0 success, 2 usage or invalid parameters, 1 numerical failure.

#include "qsmag.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

int fail(int code, const std::string& what) {
  std::cerr << "qsmag: " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qsmag;

  CLI::App app{"Spectrum of the two-dimensional hydrogen atom in a uniform magnetic field"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string precision = "double";
  unsigned jobs = default_jobs();
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--precision", precision, "double or high")->check(CLI::IsMember({"double", "high"}));
  app.add_option("--jobs", jobs, "worker threads (default: QSSPEC_JOBS or 1)")->check(CLI::PositiveNumber);

  QsArgs qs;
  auto* qs_cmd = app.add_subcommand("qs", "exact solutions of the truncated series");
  qs_cmd->add_option("--n", qs.n, "polynomial degree n")->required();
  qs_cmd->add_option("--s", qs.s, "|m|");
  qs_cmd->add_option("--Z", qs.Z, "charge, e.g. 1, 0.5 or 1/2");

  RrmArgs rrm;
  std::string rrm_basis = "auto", rrm_N = "4..7";
  std::optional<int> rrm_levels;
  auto* rrm_cmd = app.add_subcommand("rrm", "Rayleigh-Ritz convergence table");
  rrm_cmd->add_option("--gamma", rrm.gamma, "field strength (decimal or p/q)")->required();
  rrm_cmd->add_option("--Z", rrm.Z, "charge");
  rrm_cmd->add_option("--s", rrm.s, "|m|");
  rrm_cmd->add_option("--basis", rrm_basis, "gaussian, exponential or auto");
  rrm_cmd->add_option("--alpha", rrm.alpha, "exponential weight exp(-alpha r)");
  rrm_cmd->add_option("--N", rrm_N, "basis size or range, e.g. 4..7");
  rrm_cmd->add_option("--levels", rrm_levels, "number of levels");

  CriticalArgs crit;
  std::string crit_basis = "auto";
  auto* crit_cmd = app.add_subcommand("critical", "critical fields where W crosses zero");
  crit_cmd->add_option("--nu-max", crit.nu_max, "highest radial level");
  crit_cmd->add_option("--s", crit.s, "|m|");
  crit_cmd->add_option("--Z", crit.Z, "charge (> 0)");
  crit_cmd->add_option("--tol", crit.tol, "tolerance on |W(gamma_c)|");
  crit_cmd->add_option("--basis", crit_basis, "gaussian, exponential or auto");
  crit_cmd->add_option("--N-max", crit.N_max, "basis size ceiling (0: 12 double, 30 high)");

  SweepArgs sweep;
  std::string sweep_basis = "auto";
  auto* sweep_cmd = app.add_subcommand("sweep", "curves, lines and QS points over a gamma grid");
  sweep_cmd->add_option("--gamma-min", sweep.gamma_min, "lower end of the grid");
  sweep_cmd->add_option("--gamma-max", sweep.gamma_max, "upper end of the grid");
  sweep_cmd->add_option("--points", sweep.points, "grid points");
  sweep_cmd->add_option("--nu-max", sweep.nu_max, "highest Ritz level");
  sweep_cmd->add_option("--n-max", sweep.n_max, "highest truncation degree");
  sweep_cmd->add_option("--s", sweep.s, "|m|");
  sweep_cmd->add_option("--Z", sweep.Z, "charge");
  sweep_cmd->add_option("--basis", sweep_basis, "gaussian, exponential or auto");
  sweep_cmd->add_option("--N", sweep.N, "basis size");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "finite-difference eigenvalues");
  oracle_cmd->add_option("--Z", oracle.Z, "charge");
  oracle_cmd->add_option("--gamma", oracle.gamma, "field strength");
  oracle_cmd->add_option("--s", oracle.s, "|m|");
  oracle_cmd->add_option("--levels", oracle.levels, "number of levels")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--r-max", oracle.r_max, "outer radius");
  oracle_cmd->add_option("--n-points", oracle.n_points, "coarse grid points");
  oracle_cmd->add_option("--tolerance", oracle.tolerance, "extrapolation tolerance");

  HftArgs hft;
  std::string hft_basis = "auto";
  auto* hft_cmd = app.add_subcommand("hft-check", "finite-difference parameter derivatives of W");
  hft_cmd->add_option("--nu-max", hft.nu_max, "highest level");
  hft_cmd->add_option("--s", hft.s, "|m|");
  hft_cmd->add_option("--Z", hft.Z, "charge");
  hft_cmd->add_option("--gamma", hft.gamma, "field strength");
  hft_cmd->add_option("--step", hft.step, "central-difference step");
  hft_cmd->add_option("--basis", hft_basis, "gaussian, exponential or auto");
  hft_cmd->add_option("--N", hft.N, "basis size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Precision prec = parse_precision(precision);
    OutputRecord record;
    if (qs_cmd->parsed()) {
      record = cmd_qs(qs);
    } else if (rrm_cmd->parsed()) {
      rrm.basis = parse_basis_policy(rrm_basis);
      std::tie(rrm.N_min, rrm.N_max) = parse_N_range(rrm_N);
      rrm.levels = rrm_levels;
      rrm.precision = prec;
      record = cmd_rrm(rrm);
    } else if (crit_cmd->parsed()) {
      crit.basis = parse_basis_policy(crit_basis);
      crit.precision = prec;
      crit.jobs = jobs;
      record = cmd_critical(crit);
    } else if (sweep_cmd->parsed()) {
      sweep.basis = parse_basis_policy(sweep_basis);
      sweep.precision = prec;
      sweep.jobs = jobs;
      record = cmd_sweep(sweep);
    } else if (oracle_cmd->parsed()) {
      record = cmd_oracle(oracle);
    } else {
      hft.basis = parse_basis_policy(hft_basis);
      hft.precision = prec;
      record = cmd_hft_check(hft);
    }
    std::cout << emit(record, parse_format(format));
    for (const auto& d : record.diagnostics) std::cerr << "qsmag: " << d << '\n';
  } catch (const DomainError& e) {
    return fail(2, e.what());
  } catch (const NumericalError& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 0;
}
