#pragma once

#include <functional>
#include <optional>

#include "maternlab/kernels.hpp"

namespace maternlab {

struct RadialOptions {
  double abs_tol = 1e-9;
  /// Per-panel relative tolerance of the Gauss-Kronrod rule.
  double rel_tol = 1e-13;
  int max_panels = 20'000;
};

/// Closed-form isotropic spectral density (Matern and GaussianKernel only).
/// Normalized so that phi(x) = int f(w) exp(i w.x) dw over R^d.
double spectral_density(const KernelSpec& spec, int d, double z);

/// Spectral density by numerical evaluation of the radial (Hankel-type)
/// transform of the correlation. Panels end at the zeros of the Bessel
/// factor; oscillatory algebraic tails are summed with Wynn's epsilon.
double radial_fourier(const KernelSpec& spec, int d, double z, const RadialOptions& opts = {});

/// Inverse transform: phi(x) from a radial spectral density.
/// `frequency_scale` is a rough width of the density (panel sizing only).
double inverse_radial_fourier(const std::function<double(double)>& density, int d, double x,
                              double frequency_scale, const RadialOptions& opts = {});

/// int_0^R u^(d-1) Omega_d(u z) g(u) du with R = support or infinity.
double radial_integral(const std::function<double(double)>& g, int d, double z,
                       double length_scale, std::optional<double> support,
                       const RadialOptions& opts = {});

}  // namespace maternlab
