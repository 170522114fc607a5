#pragma once

// Physical parameters of the radial problem
//
//   [-1/2 (d^2/dr^2 + 1/r d/dr) + m^2/(2 r^2) + gamma^2 r^2 / 8 - Z/r] R = W R,
//   W = E - gamma m / 2,
//
// together with its exactly solvable limits and finite-difference
// Hellmann-Feynman derivatives.

#include "qsmag/error.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <vector>

namespace qsmag {

/// Z, gamma and m of the radial problem; s = |m| is derived on construction.
class ModelParams {
 public:
  ModelParams(double Z, double gamma, int m) : Z_(Z), gamma_(gamma), m_(m), s_(std::abs(m)) {
    require(std::isfinite(Z), "Z must be finite");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be finite and >= 0");
  }

  double Z() const { return Z_; }
  double gamma() const { return gamma_; }
  int m() const { return m_; }
  int s() const { return s_; }

  ModelParams with_Z(double Z) const { return {Z, gamma_, m_}; }
  ModelParams with_gamma(double gamma) const { return {Z_, gamma, m_}; }

  /// Z > 0 and gamma > 0: the confined, attractive regime handled by the
  /// variational solvers.
  bool is_physical() const { return Z_ > 0.0 && gamma_ > 0.0; }

 private:
  double Z_;
  double gamma_;
  int m_;
  int s_;
};

/// Radial quantum number nu (node count of R on (0, inf)) and angular index s.
struct LevelIndex {
  int nu = 0;
  int s = 0;

  LevelIndex(int nu_, int s_) : nu(nu_), s(s_) {
    require(nu >= 0 && s >= 0, "level index requires nu >= 0 and s >= 0");
  }
};

inline double energy_from_W(double W, const ModelParams& params) {
  return W + params.gamma() * params.m() / 2.0;
}

inline double W_from_energy(double E, const ModelParams& params) {
  return E - params.gamma() * params.m() / 2.0;
}

/// Field-free (hydrogenic) eigenvalue -2Z^2/(2nu+2s+1)^2.
inline double hydrogenic_W(LevelIndex level, double Z) {
  require(Z > 0.0, "hydrogenic_W requires Z > 0");
  const double d = 2.0 * level.nu + 2.0 * level.s + 1.0;
  return -2.0 * Z * Z / (d * d);
}

/// Charge-free (oscillator) eigenvalue (2nu+s+1) gamma / 2.
inline double oscillator_W(LevelIndex level, double gamma) {
  require(gamma > 0.0, "oscillator_W requires gamma > 0");
  return 0.5 * (2.0 * level.nu + level.s + 1.0) * gamma;
}

/// gamma/Z^2: the field parameter of the equivalent unit-charge problem.
inline double scale_to_unit_Z(double gamma, double Z) {
  require(Z != 0.0, "scale_to_unit_Z requires Z != 0");
  return gamma / (Z * Z);
}

/// Ascending eigenvalues W for the angular index of the given parameters.
using SpectrumProvider = std::function<std::vector<double>(const ModelParams&)>;

struct HftDerivatives {
  double dW_dZ = 0.0;
  double dW_dgamma = 0.0;
  double W = 0.0;
};

namespace detail {

// Central difference of level `nu` along one parameter. The sorted index is
// trusted only while the nearest neighbouring level sits at least ten
// stencil shifts away.
inline double tracked_central_difference(const SpectrumProvider& spectrum, const ModelParams& center,
                                         const ModelParams& minus, const ModelParams& plus, int nu,
                                         double step, const char* what) {
  const auto w0 = spectrum(center);
  const auto wm = spectrum(minus);
  const auto wp = spectrum(plus);
  const auto need = static_cast<std::size_t>(nu) + 1;
  if (w0.size() < need || wm.size() < need || wp.size() < need) {
    throw LevelTrackingError("spectrum provider returned fewer than nu+1 levels");
  }
  const double shift = std::max(std::abs(wp[nu] - w0[nu]), std::abs(w0[nu] - wm[nu]));
  double gap = std::numeric_limits<double>::infinity();
  if (nu > 0) gap = std::min(gap, w0[nu] - w0[nu - 1]);
  if (w0.size() > need) gap = std::min(gap, w0[nu + 1] - w0[nu]);
  if (!(gap > 10.0 * shift)) {
    std::ostringstream msg;
    msg << "level " << nu << " cannot be tracked in " << what << ": gap " << gap
        << " is below 10x the stencil shift " << shift;
    throw LevelTrackingError(msg.str());
  }
  return (wp[nu] - wm[nu]) / (2.0 * step);
}

}  // namespace detail

/// Central finite-difference estimates of dW/dZ and dW/dgamma for one level.
/// For Z > 0, gamma > 0 the expected signs are dW/dZ < 0 and dW/dgamma > 0.
inline HftDerivatives hft_signs(LevelIndex level, const ModelParams& params, const SpectrumProvider& spectrum,
                                double step) {
  require(step > 0.0, "hft_signs requires step > 0");
  require(level.s == params.s(), "level s must match params s");
  require(params.gamma() - step > 0.0, "gamma stencil must stay positive");

  HftDerivatives out;
  out.dW_dZ = detail::tracked_central_difference(spectrum, params, params.with_Z(params.Z() - step),
                                                 params.with_Z(params.Z() + step), level.nu, step, "Z");
  out.dW_dgamma = detail::tracked_central_difference(spectrum, params, params.with_gamma(params.gamma() - step),
                                                     params.with_gamma(params.gamma() + step), level.nu, step,
                                                     "gamma");
  out.W = spectrum(params)[level.nu];
  return out;
}

}  // namespace qsmag
