#pragma once

#include <span>
#include <vector>

#include "fkp/grid.hpp"

namespace fkp {

/// Default regularization of 1/xi_1^2 as 1/(xi_1 + i lambda)^2.
inline constexpr double kDefaultLambda = 2.2e-16;

/// Smallest fractional order for which lumps exist in the energy space.
inline constexpr double kEnergyCriticalAlpha = 0.8;

/// Parameters of the steady fKP equation
///   -c phi + phi^2 / 2 - D_x^alpha phi + sigma d_x^{-2} phi_yy = 0.
struct SymbolParams {
  double alpha = 2.0;
  double c = 1.0;
  int sigma = -1;  ///< -1 for fKP-I, +1 for fKP-II
  double lambda = kDefaultLambda;

  /// Throws ErrorCode::invalid_argument on alpha, c or lambda out of range.
  void validate() const;
};

/// A Fourier multiplier sampled on a grid's wavenumber lattice.
class MultiplierField {
 public:
  MultiplierField(SpectralGrid grid, std::vector<Complex> values);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator()(std::size_t kx, std::size_t ky) const noexcept {
    return values_[grid_.index(kx, ky)];
  }
  Complex operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  SpectralGrid grid_;
  std::vector<Complex> values_;
};

/// 2 (c + xi_2^2 / (xi_1 + i lambda)^2 + |xi_1|^alpha), the operator inverted
/// by each Petviashvili step. Only fKP-I is supported; sigma = +1 throws
/// ErrorCode::unsupported_equation.
MultiplierField petviashvili_denominator(const SpectralGrid& grid, const SymbolParams& p);

/// Kernel symbol xi_1^2 / (c xi_1^2 + xi_2^2 + |xi_1|^(alpha+2)).
///
/// At the origin the value is 1/c, the limit of the lambda-regularized form
/// 1/(c + xi_2^2/(xi_1 + i lambda)^2 + |xi_1|^alpha); this matches the
/// treatment of the mean mode in the solver. On xi_1 = 0, xi_2 != 0 it is 0.
MultiplierField symbol_m(const SpectralGrid& grid, double alpha, double c = 1.0);

/// xi_1 / (c xi_1^2 + xi_2^2 + |xi_1|^(alpha+2)); zero at the origin.
MultiplierField symbol_h(const SpectralGrid& grid, double alpha, double c = 1.0);

/// inverse(m * forward(f)). Throws ErrorCode::dimension_mismatch when grids
/// differ, ErrorCode::symmetry_violation when the result is not real.
RealField apply_multiplier(const RealField& f, const MultiplierField& m);

/// Builds a multiplier from a callable (xi1, xi2) -> Complex.
template <typename Fn>
MultiplierField make_multiplier(const SpectralGrid& grid, Fn&& symbol) {
  std::vector<Complex> values(grid.size());
  for (std::size_t ky = 0; ky < grid.ny(); ++ky) {
    const double k2 = grid.xi2(ky);
    for (std::size_t kx = 0; kx < grid.nx(); ++kx) {
      values[grid.index(kx, ky)] = Complex(symbol(grid.xi1(kx), k2));
    }
  }
  return {grid, std::move(values)};
}

}  // namespace fkp
