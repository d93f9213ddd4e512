#pragma once

#include <utility>
#include <vector>

#include "fkp/grid.hpp"

namespace fkp {

enum class Axis { x, y };

struct SectionPoint {
  double coordinate;
  double value;
};

/// Values along the grid line nearest to `offset`: for Axis::x the line
/// y = offset (phi(x, offset)), for Axis::y the line x = offset. Throws
/// ErrorCode::out_of_range when the offset lies outside the domain.
std::vector<SectionPoint> cross_section(const RealField& phi, Axis axis, double offset = 0.0);

/// Reflection defects relative to ||phi||_inf:
///   x_defect = max |phi(x, y) - phi(-x, y)|, y_defect analogously.
struct SymmetryReport {
  double x_defect = 0.0;
  double y_defect = 0.0;
};

SymmetryReport symmetry_report(const RealField& phi);

/// r^power * phi along the positive half of an axis through the origin, and
/// its plateau over the window [l/4, l/2].
struct DecayProfile {
  Axis axis = Axis::x;
  double power = 2.0;
  std::vector<double> radii;
  std::vector<double> products;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double plateau_value = 0.0;         ///< median of the products in the window
  double plateau_rel_variation = 0.0; ///< max |product - median| / |median| in the window
  double window_max_abs = 0.0;        ///< max |product| in the window
};

DecayProfile decay_profile(const RealField& phi, Axis axis, double power = 2.0);

struct PeakAmplitude {
  double alpha;
  double amplitude;
};

/// max |phi| per entry, in the order given.
std::vector<PeakAmplitude> peakedness(const std::vector<std::pair<double, RealField>>& phis);

}  // namespace fkp
