// Lists the exact (truncated-series) solutions for Z = 1, s = 0 and checks
// each against the Gaussian Ritz spectrum at its own field strength.

#include "qsmag.hpp"

#include <cstdio>

int main() {
  using namespace qsmag;
  std::printf(" n  i        gamma               W          nodes  Ritz level   |W_ritz - W|\n");
  for (int n = 1; n <= 8; ++n) {
    for (const auto& sol : qs_solutions(n, 0, Rational(1)).solutions) {
      const double g = sol.gamma_value();
      const auto w = rrm_spectrum<double>(BasisSpec::gaussian(n + 1, 0, g), ModelParams(1.0, g, 0)).W_double();
      std::printf("%2d %2d  %18.15f  %18.15f  %3d  %10.12f  %.1e%s\n", n, sol.index, g, sol.W_value(),
                  sol.node_count, w[sol.node_count], std::abs(w[sol.node_count] - sol.W_value()),
                  sol.gamma_exact ? "  (rational)" : "");
    }
  }
}
