#pragma once

#include "fkp/grid.hpp"

namespace fkp {

struct ExactLumpParams {
  double c = 1.0;
  double t = 0.0;
};

/// Closed-form KP-I (alpha = 2) lump
///   8c (1 - (c/3) X^2 + (c^2/3) y^2) / (1 + (c/3) X^2 + (c^2/3) y^2)^2,  X = x - ct.
RealField exact_kp1_lump(const SpectralGrid& grid, const ExactLumpParams& p = {});

/// A exp(-(x^2 + y^2) / w^2).
RealField gaussian_seed(const SpectralGrid& grid, double amplitude, double width);

/// Maps a speed-1 solution psi to speed c via
///   phi_c(x, y) = c psi(c^(1/alpha) x, c^(1/alpha + 1/2) y),
/// evaluated on target_grid by bilinear interpolation of psi. Throws
/// ErrorCode::out_of_range when a stretched target node leaves the source
/// domain.
RealField rescale_solution(const RealField& psi, double alpha, double c,
                           const SpectralGrid& target_grid);

/// Target grid whose stretched nodes coincide with the nodes of `source`, so
/// that rescale_solution involves no interpolation error.
SpectralGrid rescaled_grid(const SpectralGrid& source, double alpha, double c);

/// Bilinear interpolation of a periodic field at physical coordinates (x, y)
/// inside [-lx, lx] x [-ly, ly].
double interpolate_bilinear(const RealField& f, double x, double y);

}  // namespace fkp
