// Ritz convergence at gamma = 4 and gamma = 2/3 with the Gaussian basis, and
// the critical fields of the five lowest s = 0 levels.

#include "qsmag.hpp"

#include <cstdio>

int main() {
  using namespace qsmag;
  for (double gamma : {4.0, 2.0 / 3.0}) {
    const ModelParams p(1.0, gamma, 0);
    const auto t = converge_spectrum<double>(p, BasisFamily{BasisKind::GaussianMonomial, 1.0}, 4, 7, 4);
    std::printf("gamma = %.10g\n  N        W0              W1              W2              W3\n", gamma);
    for (std::size_t r = 0; r < t.N.size(); ++r) {
      std::printf("  %d", t.N[r]);
      for (double w : t.W[r]) std::printf("  %14.10f", w);
      std::printf("\n");
    }
  }
  std::printf("critical fields, Z = 1, s = 0\n");
  const auto table = critical_table(4, 0, 1.0, 1e-10);
  for (const auto& row : table.rows) {
    std::printf("  nu=%d  gamma_c=%.10g  (%s basis, N=%d)\n", row.nu, row.gamma_c, to_string(row.basis_used.kind),
                row.basis_used.N);
  }
}
