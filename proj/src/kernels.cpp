#include "fkp/kernels.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fkp/error.hpp"
#include "fkp/symbols.hpp"
#include "spectral_ops.hpp"

namespace fkp {

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss_kronrod;

Verdict classify(double increment, double converging_below, double diverging_above) {
  if (increment < converging_below) return Verdict::converging;
  if (increment > diverging_above) return Verdict::diverging;
  return Verdict::inconclusive;
}

// |m|^p or |h|^p at (xi1, xi2), xi1 > 0.
double symbol_power(SymbolKind which, double alpha, double p, double k1, double k2) {
  const double den = k1 * k1 + k2 * k2 + std::pow(k1, alpha + 2.0);
  const double num = which == SymbolKind::m ? k1 * k1 : k1;
  return std::pow(num / den, p);
}

// 2 * int_0^inf |symbol|^p dxi_2 at fixed xi_1 > 0. The quadrature variable is
// xi_2 / w, w the width of the plateau before the algebraic tail sets in.
double transverse_integral(SymbolKind which, double alpha, double p, double k1, double tol) {
  const double w = k1 * std::sqrt(1.0 + std::pow(k1, alpha));
  auto f = [&](double t) { return symbol_power(which, alpha, p, k1, w * t); };
  thread_local exp_sinh<double> tail_rule;
  const double core = gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, tol);
  const double tail = tail_rule.integrate(f, 1.0, std::numeric_limits<double>::infinity(), tol);
  return 2.0 * w * (core + tail);
}

// Both signs of xi_1 over [a, 2a], a > 0.
double strip_2d(SymbolKind which, double alpha, double p, double a, double tol) {
  auto g = [&](double s) { return transverse_integral(which, alpha, p, a * s, tol * 0.1); };
  return 2.0 * a * gauss_kronrod<double, 31>::integrate(g, 1.0, 2.0, 15, tol);
}

double strip_separated(SymbolKind which, double alpha, double p, double a, double tol) {
  const double z = transverse_factor(p);
  auto g = [&](double k1) {
    const double radial = std::pow(1.0 + std::pow(k1, alpha), 0.5 - p);
    return which == SymbolKind::m ? k1 * radial : std::pow(k1, 1.0 - p) * radial;
  };
  return 2.0 * z * gauss_kronrod<double, 61>::integrate(g, a, 2.0 * a, 15, tol);
}

}  // namespace

const char* to_string(KernelKind k) { return k == KernelKind::K ? "K" : "H"; }
const char* to_string(SymbolKind k) { return k == SymbolKind::m ? "m" : "h"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converging: return "converging";
    case Verdict::diverging: return "diverging";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

RealField build_kernel(const SpectralGrid& grid, double alpha, KernelKind which, double c) {
  if (!(alpha > 0.0) || !(c > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "kernel: alpha and c must be positive");
  }
  std::vector<Complex> spec(grid.size());
  if (which == KernelKind::K) {
    const auto m = symbol_m(grid, alpha, c);
    std::copy(m.values().begin(), m.values().end(), spec.begin());
  } else {
    const auto h = symbol_h(grid, alpha, c);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = Complex(0.0, -1.0) * h[i];
    detail::zero_nyquist_x(grid, spec);
  }
  FourierTransform fft(grid);
  std::vector<double> values(grid.size());
  fft.inverse_real(spec, values);
  const double inv_area = 1.0 / grid.cell_area();
  for (double& v : values) v *= inv_area;
  return {grid, std::move(values)};
}

RealField convolve(const RealField& kernel, const RealField& f) {
  if (!(kernel.grid() == f.grid())) {
    throw Error(ErrorCode::dimension_mismatch, "convolve: kernel and field grids differ");
  }
  const SpectralGrid& g = f.grid();
  FourierTransform fft(g);
  std::vector<Complex> a(g.size()), b(g.size());
  fft.forward(kernel.values(), a);
  fft.forward(f.values(), b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i] * g.cell_area();
  return inverse_transform(SpectralField(g, std::move(a)));
}

double convolution_defect(const RealField& phi, double alpha, double c, KernelKind which) {
  const SpectralGrid& g = phi.grid();
  std::vector<double> sq(g.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = phi[i] * phi[i];
  RealField source(g, std::move(sq));
  if (which == KernelKind::H) {
    // (phi^2)_x, spectrally.
    FourierTransform fft(g);
    std::vector<Complex> spec(g.size());
    fft.forward(source.values(), spec);
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      for (std::size_t kx = 0; kx < g.nx(); ++kx) spec[g.index(kx, ky)] *= Complex(0.0, g.xi1(kx));
    }
    detail::zero_nyquist_x(g, spec);
    std::vector<double> dx(g.size());
    fft.inverse_real(spec, dx);
    source = RealField(g, std::move(dx));
  }
  const RealField kernel = build_kernel(g, alpha, which, c);
  const RealField conv = convolve(kernel, source);
  // (phi^2)_x has no mean, so the H form cannot reproduce the mean of phi.
  double mean = 0.0;
  if (which == KernelKind::H) {
    for (double v : phi.values()) mean += v;
    mean /= static_cast<double>(g.size());
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    defect = std::max(defect, std::abs(phi[i] - mean - 0.5 * conv[i]));
  }
  return defect;
}

KernelDecay kernel_decay(const RealField& kernel, double power) {
  if (power != 1.0 && power != 2.0) {
    throw Error(ErrorCode::invalid_argument, "kernel decay: power must be 1 or 2");
  }
  return {decay_profile(kernel, Axis::x, power), decay_profile(kernel, Axis::y, power)};
}

double transverse_factor(double p) {
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(p - 0.5) - std::lgamma(p));
}

IntegrabilityProbe integrability_probe(double alpha, double p, SymbolKind which,
                                       const ProbeOptions& options) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_argument, "probe: alpha must be positive");
  if (!(p > 0.5) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "probe: exponent p = " << p << " makes int (1 + z^2)^(-p) dz diverge (need p > 1/2)";
    throw Error(ErrorCode::invalid_exponent, os.str());
  }
  if (options.min_log2_radius < 1 || options.max_log2_radius <= options.min_log2_radius) {
    throw Error(ErrorCode::invalid_argument, "probe: radius range must satisfy 1 <= min < max");
  }
  IntegrabilityProbe probe;
  probe.alpha = alpha;
  probe.p = p;
  probe.which = which;

  const double tol = options.quadrature_tol;
  // Region {1/R <= |xi_1| <= R}; start from [1/R0, R0] and add dyadic shells.
  const double r0 = std::ldexp(1.0, options.min_log2_radius);
  double full = 0.0, separated = 0.0;
  for (double a = 1.0 / r0; a < r0; a *= 2.0) {
    full += strip_2d(which, alpha, p, a, tol);
    separated += strip_separated(which, alpha, p, a, tol);
  }
  std::vector<double> powers{full};
  probe.truncation_radii.push_back(r0);
  probe.truncated_norms.push_back(std::pow(full, 1.0 / p));
  probe.separated_norms.push_back(std::pow(separated, 1.0 / p));
  for (int k = options.min_log2_radius + 1; k <= options.max_log2_radius; ++k) {
    const double r = std::ldexp(1.0, k);
    full += strip_2d(which, alpha, p, 0.5 * r, tol) + strip_2d(which, alpha, p, 1.0 / r, tol);
    separated += strip_separated(which, alpha, p, 0.5 * r, tol) +
                 strip_separated(which, alpha, p, 1.0 / r, tol);
    powers.push_back(full);
    probe.truncation_radii.push_back(r);
    probe.truncated_norms.push_back(std::pow(full, 1.0 / p));
    probe.separated_norms.push_back(std::pow(separated, 1.0 / p));
  }
  const double last = powers.back();
  const double prev = powers[powers.size() - 2];
  probe.last_increment = prev > 0.0 ? (last - prev) / prev : INFINITY;
  probe.route_discrepancy = std::abs(full - separated) / separated;
  probe.verdict = classify(probe.last_increment, options.converging_below, options.diverging_above);
  return probe;
}

LatticeNormProbe kernel_lr_probe(const RealField& kernel, double r, const ProbeOptions& options) {
  if (!(r >= 1.0)) throw Error(ErrorCode::invalid_exponent, "lattice probe: r must be >= 1");
  const SpectralGrid& g = kernel.grid();
  const double l = std::min(g.lx(), g.ly());
  LatticeNormProbe probe;
  probe.r = r;
  for (double radius = l / 16.0; radius <= 0.5 * l * (1 + 1e-12); radius *= 2.0) {
    double sum = 0.0;
    for (std::size_t iy = 0; iy < g.ny(); ++iy) {
      const double y = g.y(iy);
      for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const double x = g.x(ix);
        if (x * x + y * y <= radius * radius) sum += std::pow(std::abs(kernel(ix, iy)), r);
      }
    }
    probe.radii.push_back(radius);
    probe.norms.push_back(sum * g.cell_area());
  }
  const double last = probe.norms.back();
  const double prev = probe.norms[probe.norms.size() - 2];
  probe.last_increment = prev > 0.0 ? (last - prev) / prev : INFINITY;
  for (double& v : probe.norms) v = std::pow(v, 1.0 / r);
  probe.verdict = classify(probe.last_increment, options.converging_below, options.diverging_above);
  return probe;
}

}  // namespace fkp
