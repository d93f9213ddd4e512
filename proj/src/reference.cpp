#include "fkp/reference.hpp"

#include <cmath>
#include <sstream>

#include "fkp/error.hpp"

namespace fkp {

RealField exact_kp1_lump(const SpectralGrid& grid, const ExactLumpParams& p) {
  if (!(p.c > 0.0)) throw Error(ErrorCode::invalid_argument, "exact lump: c must be positive");
  std::vector<double> v(grid.size());
  const double a = p.c / 3.0;
  const double b = p.c * p.c / 3.0;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double y2 = grid.y(iy) * grid.y(iy);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = grid.x(ix) - p.c * p.t;
      const double den = 1.0 + a * x * x + b * y2;
      v[grid.index(ix, iy)] = 8.0 * p.c * (1.0 - a * x * x + b * y2) / (den * den);
    }
  }
  return {grid, std::move(v)};
}

RealField gaussian_seed(const SpectralGrid& grid, double amplitude, double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::invalid_argument, "gaussian seed: width must be positive");
  std::vector<double> v(grid.size());
  const double inv_w2 = 1.0 / (width * width);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double y2 = grid.y(iy) * grid.y(iy);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = grid.x(ix);
      v[grid.index(ix, iy)] = amplitude * std::exp(-(x * x + y2) * inv_w2);
    }
  }
  return {grid, std::move(v)};
}

double interpolate_bilinear(const RealField& f, double x, double y) {
  const SpectralGrid& g = f.grid();
  const double tol = 1e-12;
  if (x < -g.lx() * (1 + tol) || x > g.lx() * (1 + tol) || y < -g.ly() * (1 + tol) ||
      y > g.ly() * (1 + tol)) {
    std::ostringstream os;
    os << "interpolation point (" << x << ", " << y << ") outside [" << -g.lx() << ", "
       << g.lx() << "] x [" << -g.ly() << ", " << g.ly() << "]";
    throw Error(ErrorCode::out_of_range, os.str());
  }
  const double sx = (x + g.lx()) / g.dx();
  const double sy = (y + g.ly()) / g.dy();
  // Snap to a node when within rounding of it so coincident lattices are exact.
  auto split = [](double s, std::size_t n, std::size_t& i0, double& frac) {
    double fl = std::floor(s);
    frac = s - fl;
    if (frac < 1e-9) frac = 0.0;
    if (frac > 1.0 - 1e-9) {
      frac = 0.0;
      fl += 1.0;
    }
    long i = static_cast<long>(fl);
    i = ((i % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
    i0 = static_cast<std::size_t>(i);
  };
  std::size_t ix0, iy0;
  double fx, fy;
  split(sx, g.nx(), ix0, fx);
  split(sy, g.ny(), iy0, fy);
  const std::size_t ix1 = (ix0 + 1) % g.nx();
  const std::size_t iy1 = (iy0 + 1) % g.ny();
  const double v00 = f(ix0, iy0);
  if (fx == 0.0 && fy == 0.0) return v00;
  return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * f(ix1, iy0) + (1 - fx) * fy * f(ix0, iy1) +
         fx * fy * f(ix1, iy1);
}

RealField rescale_solution(const RealField& psi, double alpha, double c,
                           const SpectralGrid& target_grid) {
  if (!(alpha > 0.0) || !(c > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "rescale: alpha and c must be positive");
  }
  const double sx = std::pow(c, 1.0 / alpha);
  const double sy = std::pow(c, 1.0 / alpha + 0.5);
  std::vector<double> v(target_grid.size());
  for (std::size_t iy = 0; iy < target_grid.ny(); ++iy) {
    const double y = sy * target_grid.y(iy);
    for (std::size_t ix = 0; ix < target_grid.nx(); ++ix) {
      v[target_grid.index(ix, iy)] = c * interpolate_bilinear(psi, sx * target_grid.x(ix), y);
    }
  }
  return {target_grid, std::move(v)};
}

SpectralGrid rescaled_grid(const SpectralGrid& source, double alpha, double c) {
  return {source.nx(), source.ny(), source.lx() / std::pow(c, 1.0 / alpha),
          source.ly() / std::pow(c, 1.0 / alpha + 0.5)};
}

}  // namespace fkp
