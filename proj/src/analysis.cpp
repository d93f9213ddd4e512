#include "fkp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkp/error.hpp"

namespace fkp {

namespace {

std::size_t nearest_line(double offset, double half_width, double step, std::size_t n,
                         const char* name) {
  if (!(offset >= -half_width && offset <= half_width)) {
    std::ostringstream os;
    os << "cross section: " << name << " offset " << offset << " outside [" << -half_width << ", "
       << half_width << "]";
    throw Error(ErrorCode::out_of_range, os.str());
  }
  const auto i = static_cast<long>(std::lround((offset + half_width) / step));
  return static_cast<std::size_t>(i) % n;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

}  // namespace

std::vector<SectionPoint> cross_section(const RealField& phi, Axis axis, double offset) {
  const SpectralGrid& g = phi.grid();
  std::vector<SectionPoint> out;
  if (axis == Axis::x) {
    const std::size_t iy = nearest_line(offset, g.ly(), g.dy(), g.ny(), "y");
    out.reserve(g.nx());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) out.push_back({g.x(ix), phi(ix, iy)});
  } else {
    const std::size_t ix = nearest_line(offset, g.lx(), g.dx(), g.nx(), "x");
    out.reserve(g.ny());
    for (std::size_t iy = 0; iy < g.ny(); ++iy) out.push_back({g.y(iy), phi(ix, iy)});
  }
  return out;
}

SymmetryReport symmetry_report(const RealField& phi) {
  const SpectralGrid& g = phi.grid();
  const double scale = phi.max_abs();
  SymmetryReport r;
  if (scale == 0.0) return r;
  // Node j sits at -l + j dx, so -x_j is node (n - j) mod n.
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    const std::size_t my = (g.ny() - iy) % g.ny();
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const std::size_t mx = (g.nx() - ix) % g.nx();
      const double v = phi(ix, iy);
      r.x_defect = std::max(r.x_defect, std::abs(v - phi(mx, iy)));
      r.y_defect = std::max(r.y_defect, std::abs(v - phi(ix, my)));
    }
  }
  r.x_defect /= scale;
  r.y_defect /= scale;
  return r;
}

DecayProfile decay_profile(const RealField& phi, Axis axis, double power) {
  const SpectralGrid& g = phi.grid();
  DecayProfile d;
  d.axis = axis;
  d.power = power;
  const bool along_x = axis == Axis::x;
  const std::size_t n = along_x ? g.nx() : g.ny();
  const double l = along_x ? g.lx() : g.ly();
  d.window_lo = 0.25 * l;
  d.window_hi = 0.5 * l;
  std::vector<double> window;
  for (std::size_t j = n / 2 + 1; j < n; ++j) {
    const double r = along_x ? g.x(j) : g.y(j);
    const double v = along_x ? phi(j, g.ny() / 2) : phi(g.nx() / 2, j);
    const double product = std::pow(r, power) * v;
    d.radii.push_back(r);
    d.products.push_back(product);
    if (r >= d.window_lo && r <= d.window_hi) {
      window.push_back(product);
      d.window_max_abs = std::max(d.window_max_abs, std::abs(product));
    }
  }
  d.plateau_value = median(window);
  double dev = 0.0;
  for (double v : window) dev = std::max(dev, std::abs(v - d.plateau_value));
  d.plateau_rel_variation =
      d.plateau_value != 0.0 ? dev / std::abs(d.plateau_value) : (dev > 0.0 ? INFINITY : 0.0);
  return d;
}

std::vector<PeakAmplitude> peakedness(const std::vector<std::pair<double, RealField>>& phis) {
  std::vector<PeakAmplitude> out;
  out.reserve(phis.size());
  for (const auto& [alpha, phi] : phis) out.push_back({alpha, phi.max_abs()});
  return out;
}

}  // namespace fkp
