#pragma once

// Spectral building blocks shared by the solver and the diagnostics.

#include <cmath>
#include <span>

#include "fkp/grid.hpp"

namespace fkp::detail {

/// Removes the modes xi_1 = 0, xi_2 != 0 (fields with zero mean in x).
///
/// These are the modes the regularized transverse term weights by ~1/lambda^2,
/// so transform round-off left in them would dominate any pairing.
inline void project_zero_mass(const SpectralGrid& grid, std::span<Complex> spec) {
  for (std::size_t ky = 1; ky < grid.ny(); ++ky) spec[grid.index(0, ky)] = 0.0;
}

/// Zeroes the unpaired Nyquist column; needed before applying a symbol odd
/// in xi_1 if the result must be real.
inline void zero_nyquist_x(const SpectralGrid& grid, std::span<Complex> spec) {
  const std::size_t kx = grid.nx() / 2;
  for (std::size_t j = 0; j < grid.ny(); ++j) spec[grid.index(kx, j)] = 0.0;
}

/// Spectrum of S phi = (-c phi + phi^2/2 - D_x^alpha phi)_xx - phi_yy:
///   -xi1^2 (phi^2)^ / 2 + (c xi1^2 + |xi1|^(alpha+2) + xi2^2) phi^.
template <typename WeightFn>
void residual_spectrum(const SpectralGrid& grid, std::span<const Complex> phi_hat,
                       std::span<const Complex> square_hat, WeightFn&& weight,
                       std::span<Complex> out) {
  for (std::size_t ky = 0; ky < grid.ny(); ++ky) {
    const double k2 = grid.xi2(ky);
    for (std::size_t kx = 0; kx < grid.nx(); ++kx) {
      const double k1 = grid.xi1(kx);
      const std::size_t i = grid.index(kx, ky);
      out[i] = -0.5 * k1 * k1 * square_hat[i] + weight(k1, k2, i) * phi_hat[i];
    }
  }
}

inline double max_abs_real(std::span<const Complex> v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z.real()));
  return m;
}

}  // namespace fkp::detail
