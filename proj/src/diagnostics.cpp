#include "fkp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "spectral_ops.hpp"

namespace fkp {

double residual(const RealField& phi, const SymbolParams& p) {
  p.validate();
  const SpectralGrid& g = phi.grid();
  FourierTransform fft(g);
  std::vector<Complex> phi_hat(g.size());
  fft.forward(phi.values(), phi_hat);
  detail::project_zero_mass(g, phi_hat);
  std::vector<double> sq(g.size());
  fft.inverse_real(phi_hat, sq);
  for (double& v : sq) v *= v;
  std::vector<Complex> sq_hat(g.size());
  fft.forward(std::span<const double>(sq), sq_hat);

  std::vector<Complex> s_hat(g.size());
  detail::residual_spectrum(
      g, phi_hat, sq_hat,
      [&](double k1, double k2, std::size_t) {
        return p.c * k1 * k1 + std::pow(std::abs(k1), p.alpha + 2.0) + k2 * k2;
      },
      s_hat);
  fft.inverse(s_hat, s_hat);
  return detail::max_abs_real(s_hat);
}

FunctionalValues functionals(const RealField& phi, double alpha, double lambda) {
  const SpectralGrid& g = phi.grid();
  const double area = g.cell_area();
  const double n = static_cast<double>(g.size());
  FunctionalValues out;

  double sum = 0.0;
  for (double v : phi.values()) sum += v;
  out.dc_mode = sum / n;

  FourierTransform fft(g);
  std::vector<Complex> phi_hat(g.size());
  fft.forward(phi.values(), phi_hat);
  detail::project_zero_mass(g, phi_hat);
  std::vector<double> projected(g.size());
  fft.inverse_real(phi_hat, projected);

  // Spectral route for L.
  double weighted = 0.0;
  for (std::size_t ky = 0; ky < g.ny(); ++ky) {
    const double k2 = g.xi2(ky);
    for (std::size_t kx = 0; kx < g.nx(); ++kx) {
      const double k1 = g.xi1(kx);
      const double transverse = k2 == 0.0 ? 0.0 : k2 * k2 / (k1 * k1 + lambda * lambda);
      weighted += (1.0 + std::pow(std::abs(k1), alpha) + transverse) *
                  std::norm(phi_hat[g.index(kx, ky)]);
    }
  }
  out.l_value = 0.5 * weighted * area / n;

  // Real-space route: build D_x^{alpha/2} phi and d_x^{-1} d_y phi as fields.
  std::vector<Complex> work(g.size());
  auto component_norm_sq = [&](auto&& symbol) {
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const double k2 = g.xi2(ky);
      for (std::size_t kx = 0; kx < g.nx(); ++kx) {
        const std::size_t i = g.index(kx, ky);
        work[i] = symbol(g.xi1(kx), k2) * phi_hat[i];
      }
    }
    fft.inverse(work, work);
    double s = 0.0;
    for (const Complex& z : work) s += std::norm(z);
    return s * area;
  };
  const double disp_sq =
      component_norm_sq([&](double k1, double) { return Complex(std::pow(std::abs(k1), 0.5 * alpha)); });
  const Complex ilambda(0.0, lambda);
  const double trans_sq = component_norm_sq([&](double k1, double k2) {
    return k2 == 0.0 ? Complex(0.0) : Complex(k2) / (k1 + ilambda);
  });

  double l2_sq = 0.0, cubic = 0.0, abs_cubic = 0.0;
  for (double v : projected) {
    l2_sq += v * v;
    cubic += v * v * v;
    abs_cubic += std::abs(v * v * v);
  }
  l2_sq *= area;
  cubic *= area;
  abs_cubic *= area;

  out.l2_norm = std::sqrt(l2_sq);
  out.dispersive_norm = std::sqrt(disp_sq);
  out.transverse_norm = std::sqrt(trans_sq);
  out.energy_norm = std::sqrt(l2_sq + disp_sq + trans_sq);
  out.n_value = cubic / 6.0;
  out.l3_norm = std::cbrt(abs_cubic);

  const double e2 = (5.0 * alpha - 4.0) / (alpha + 2.0);
  const double ed = (18.0 - 5.0 * alpha) / (2.0 * (alpha + 2.0));
  const double product = std::pow(out.l2_norm, e2) * std::pow(out.dispersive_norm, ed) *
                         std::sqrt(out.transverse_norm);
  out.sobolev_ratio = product > 0.0 ? abs_cubic / product : 0.0;
  return out;
}

double fourier_tail(const RealField& phi) {
  const SpectralGrid& g = phi.grid();
  const auto spec = forward_transform(phi);
  const long qx = static_cast<long>(g.nx() / 4);
  const long qy = static_cast<long>(g.ny() / 4);
  double overall = 0.0, outer = 0.0;
  for (std::size_t ky = 0; ky < g.ny(); ++ky) {
    const long s2 = std::labs(SpectralGrid::signed_index(ky, g.ny()));
    for (std::size_t kx = 0; kx < g.nx(); ++kx) {
      const long s1 = std::labs(SpectralGrid::signed_index(kx, g.nx()));
      const double a = std::abs(spec(kx, ky));
      overall = std::max(overall, a);
      if (s1 > qx || s2 > qy) outer = std::max(outer, a);
    }
  }
  return overall > 0.0 ? outer / overall : 0.0;
}

}  // namespace fkp
