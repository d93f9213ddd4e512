#pragma once

#include "fkp/grid.hpp"
#include "fkp/symbols.hpp"

namespace fkp {

/// ||S phi||_inf with S phi = (-c phi + phi^2/2 - D_x^alpha phi)_xx - phi_yy,
/// evaluated spectrally on the zero-x-mass projection of phi.
double residual(const RealField& phi, const SymbolParams& p);

/// Variational quantities of a field. The x-antiderivative is taken on the
/// zero-x-mass projection of phi, with the same lambda regularization as the
/// solver.
struct FunctionalValues {
  double l_value = 0.0;          ///< (1/2) int phi^2 + (D_x^{alpha/2} phi)^2 + (d_x^{-1} d_y phi)^2
  double n_value = 0.0;          ///< (1/6) int phi^3
  double energy_norm = 0.0;      ///< ||phi||_{alpha/2}, accumulated in real space
  double sobolev_ratio = 0.0;    ///< ||phi||_3^3 over the anisotropic Sobolev product
  double dc_mode = 0.0;          ///< mean of phi over the domain
  double l2_norm = 0.0;
  double dispersive_norm = 0.0;  ///< ||D_x^{alpha/2} phi||_2
  double transverse_norm = 0.0;  ///< ||d_x^{-1} d_y phi||_2
  double l3_norm = 0.0;
};

/// L comes from spectral weights, the energy norm from real-space quadrature
/// of the three component fields; both are lattice sums times the cell area.
FunctionalValues functionals(const RealField& phi, double alpha, double lambda = kDefaultLambda);

/// Largest |phi^| with |k~_1| > nx/4 or |k~_2| > ny/4, relative to the
/// largest |phi^| overall (0 for the zero field).
double fourier_tail(const RealField& phi);

}  // namespace fkp
