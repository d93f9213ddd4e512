#pragma once

#include <string>
#include <vector>

#include "fkp/analysis.hpp"
#include "fkp/grid.hpp"

namespace fkp {

/// K has symbol m; H has symbol h. H itself is purely imaginary (h is real and
/// odd), so build_kernel returns the real odd profile G = -i H, for which
/// phi = (1/2) G * (phi^2)_x.
enum class KernelKind { K, H };
enum class SymbolKind { m, h };

const char* to_string(KernelKind k);
const char* to_string(SymbolKind k);

/// Lattice sample of the kernel, normalized so that
///   (kernel * f)(x) = sum_y kernel(x - y) f(y) dA
/// has symbol m (or -i h) exactly: kernel = inverse(symbol) / dA.
RealField build_kernel(const SpectralGrid& grid, double alpha, KernelKind which, double c = 1.0);

/// Periodic lattice convolution times the cell area. Throws
/// ErrorCode::dimension_mismatch when the grids differ.
RealField convolve(const RealField& kernel, const RealField& f);

/// ||phi - (1/2) K * phi^2||_inf. For KernelKind::H the comparison is
/// ||(phi - mean) - (1/2) G * (phi^2)_x||_inf, which also misses the Nyquist
/// column of phi^2 (dropped so that (phi^2)_x stays real).
double convolution_defect(const RealField& phi, double alpha, double c = 1.0,
                          KernelKind which = KernelKind::K);

struct KernelDecay {
  DecayProfile x;
  DecayProfile y;
};

/// r^power * kernel along both axes. power must be 1 or 2.
KernelDecay kernel_decay(const RealField& kernel, double power);

enum class Verdict { converging, diverging, inconclusive };

const char* to_string(Verdict v);

struct ProbeOptions {
  int min_log2_radius = 1;
  int max_log2_radius = 40;  // h at p = 1.9 needs the inner cutoff near 1e-12
  double converging_below = 0.01;  ///< relative increment per radius doubling
  double diverging_above = 0.05;
  double quadrature_tol = 1e-10;
};

/// Truncated L^p norms of m or h over {1/R <= |xi_1| <= R} x R, computed
/// twice: by 2D adaptive quadrature of |symbol|^p, and by the separated form
///   m: int |xi_1| (1 + |xi_1|^alpha)^(1/2 - p) dxi_1 * int (1 + z^2)^(-p) dz
///   h: int |xi_1|^(1-p) (1 + |xi_1|^alpha)^(1/2 - p) dxi_1 * int (1 + z^2)^(-p) dz.
struct IntegrabilityProbe {
  double alpha = 0.0;
  double p = 0.0;
  SymbolKind which = SymbolKind::m;
  std::vector<double> truncation_radii;
  std::vector<double> truncated_norms;   ///< 2D route
  std::vector<double> separated_norms;   ///< separated 1D route
  Verdict verdict = Verdict::inconclusive;
  double last_increment = 0.0;  ///< relative growth of the p-th power on the last doubling
  double route_discrepancy = 0.0;  ///< |2D - separated| / separated at the largest radius
};

/// Throws ErrorCode::invalid_exponent for p <= 1/2 (the z-integral diverges)
/// and ErrorCode::invalid_argument for alpha <= 0.
IntegrabilityProbe integrability_probe(double alpha, double p, SymbolKind which,
                                       const ProbeOptions& options = {});

/// The p-independent factor int_R (1 + z^2)^(-p) dz = sqrt(pi) Gamma(p - 1/2) / Gamma(p).
double transverse_factor(double p);

/// Lattice L^r sums of a kernel over discs r <= R for R = l/16, l/8, l/4, l/2.
/// The origin singularity is only resolved to grid scale, so the verdict is
/// qualitative.
struct LatticeNormProbe {
  double r = 0.0;
  std::vector<double> radii;
  std::vector<double> norms;
  double last_increment = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

LatticeNormProbe kernel_lr_probe(const RealField& kernel, double r,
                                 const ProbeOptions& options = {});

}  // namespace fkp
