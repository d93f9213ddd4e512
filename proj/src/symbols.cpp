#include "fkp/symbols.hpp"

#include <cmath>
#include <sstream>

#include "fkp/error.hpp"

namespace fkp {

void SymbolParams::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha: must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) fail("c: must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda: must be positive");
  if (sigma != -1 && sigma != 1) fail("sigma: must be -1 or +1");
}

MultiplierField::MultiplierField(SpectralGrid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::dimension_mismatch, "multiplier: size does not match grid");
  }
}

MultiplierField petviashvili_denominator(const SpectralGrid& grid, const SymbolParams& p) {
  p.validate();
  if (p.sigma != -1) {
    throw Error(ErrorCode::unsupported_equation,
                "sigma = +1 (fKP-II) has no lump solutions; only sigma = -1 is supported");
  }
  const Complex ilambda(0.0, p.lambda);
  return make_multiplier(grid, [&](double k1, double k2) {
    const Complex shifted = k1 + ilambda;
    // Written so that xi_2 = 0 contributes an exact zero even at xi_1 = 0.
    const Complex transverse = k2 == 0.0 ? Complex(0.0) : (k2 * k2) / (shifted * shifted);
    return 2.0 * (p.c + transverse + std::pow(std::abs(k1), p.alpha));
  });
}

MultiplierField symbol_m(const SpectralGrid& grid, double alpha, double c) {
  return make_multiplier(grid, [&](double k1, double k2) {
    if (k1 == 0.0) return k2 == 0.0 ? 1.0 / c : 0.0;
    const double a1 = std::abs(k1);
    return k1 * k1 / (c * k1 * k1 + k2 * k2 + std::pow(a1, alpha + 2.0));
  });
}

MultiplierField symbol_h(const SpectralGrid& grid, double alpha, double c) {
  return make_multiplier(grid, [&](double k1, double k2) {
    if (k1 == 0.0) return 0.0;
    const double a1 = std::abs(k1);
    return k1 / (c * k1 * k1 + k2 * k2 + std::pow(a1, alpha + 2.0));
  });
}

RealField apply_multiplier(const RealField& f, const MultiplierField& m) {
  if (!(f.grid() == m.grid())) {
    throw Error(ErrorCode::dimension_mismatch, "apply_multiplier: field and multiplier grids differ");
  }
  FourierTransform fft(f.grid());
  std::vector<Complex> spec(f.grid().size());
  fft.forward(f.values(), spec);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= m[i];
  return inverse_transform(SpectralField(f.grid(), std::move(spec)));
}

}  // namespace fkp
