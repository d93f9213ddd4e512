#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fkp/grid.hpp"
#include "fkp/symbols.hpp"

namespace fkp {

enum class SeedKind { gaussian, exact_kp1, file };

struct SeedSpec {
  SeedKind kind = SeedKind::gaussian;
  std::optional<double> amplitude;  ///< defaults to 3c
  double width = 2.0;
  std::string path;  ///< field file, for SeedKind::file
};

struct SolverConfig {
  SymbolParams params;
  SpectralGrid grid = SpectralGrid::square(1024, 256.0);
  double nu = 2.0;
  double tol = 1e-5;
  int max_iter = 200;
  SeedSpec seed;
  bool allow_supercritical = false;
  /// Evaluate phi^2 on a 3/2-padded grid (de-aliased products).
  bool dealias = false;

  /// Throws ErrorCode::invalid_argument naming the offending parameter.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double iter_error = 0.0;    ///< ||phi_n - phi_{n-1}||_inf
  double m_factor = 0.0;      ///< M_n
  double factor_error = 0.0;  ///< |1 - M_n|
  double residual = 0.0;      ///< ||S phi_n||_inf
};

enum class SolveStatus { converged, max_iter, diverged };

const char* to_string(SolveStatus s);

struct IterationReport {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::max_iter;
  std::string message;  ///< reason for a diverged status
};

struct SolveResult {
  RealField phi;
  IterationReport report;
};

/// Builds the initial iterate described by `seed` on the config grid.
RealField make_seed(const SolverConfig& config);

/// M = <L phi^, phi^> / <(phi^2)^, phi^> with L the regularized Petviashvili
/// denominator. The field is first projected onto the zero-x-mass subspace
/// (modes xi_1 = 0, xi_2 != 0 removed). Throws ErrorCode::degenerate_iterate
/// when the cubic pairing vanishes.
double stabilizing_factor(const RealField& phi, const SymbolParams& p);

/// One Petviashvili update; returns the next iterate and the M_n used.
std::pair<RealField, double> petviashvili_step(const RealField& phi, const SymbolParams& p,
                                               double nu);

/// Iterates until every monitor is at or below tol, max_iter is reached, or
/// the iterate blows up. Configuration and degenerate-iterate faults throw;
/// non-convergence is reported through the status.
SolveResult solve(const SolverConfig& config);

/// Solver state over one grid: cached symbols, plans and work buffers.
///
/// The iterate is held both in real space and as its spectrum; the spectrum is
/// the authoritative copy, which keeps the zero-mass modes at the size the
/// regularized denominator gives them instead of at transform round-off.
class PetviashviliIteration {
 public:
  PetviashviliIteration(const SpectralGrid& grid, const SymbolParams& p, double nu,
                        bool dealias = false);
  ~PetviashviliIteration();
  PetviashviliIteration(const PetviashviliIteration&) = delete;
  PetviashviliIteration& operator=(const PetviashviliIteration&) = delete;

  /// Replaces the iterate; the zero-x-mass modes are removed.
  void reset(const RealField& phi);

  /// Monitors of the current iterate: fills m_factor, factor_error and
  /// residual of the record. Caches the squared-field spectrum for advance().
  IterationRecord evaluate();

  /// Moves to the next iterate with the M computed by the last evaluate();
  /// returns ||phi_{n+1} - phi_n||_inf. Throws ErrorCode::divergence when the
  /// update is not finite.
  double advance();

  std::span<const double> phi() const noexcept { return phi_; }
  std::span<const Complex> spectrum() const noexcept { return spectrum_; }
  RealField field() const { return {grid_, phi_}; }

 private:
  struct Padded;

  void square_spectrum();

  SpectralGrid grid_;
  SymbolParams params_;
  double nu_;
  FourierTransform fft_;
  std::vector<Complex> denominator_;
  std::vector<double> residual_weight_;  ///< c xi1^2 + |xi1|^(alpha+2) + xi2^2
  std::vector<double> xi1_sq_;
  std::vector<double> phi_;
  std::vector<Complex> spectrum_;
  std::vector<Complex> square_;
  std::vector<Complex> work_;
  std::vector<double> real_work_;
  double m_factor_ = 0.0;
  bool evaluated_ = false;
  std::unique_ptr<Padded> padded_;
};

}  // namespace fkp
