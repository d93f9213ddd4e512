#include "fkp/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkp/error.hpp"
#include "fkp/field_io.hpp"
#include "fkp/reference.hpp"
#include "spectral_ops.hpp"

namespace fkp {

namespace {

// Relative size of the imaginary part tolerated in the pairings of M.
constexpr double kPairingImagTolerance = 1e-8;
// |cubic pairing| below this fraction of quadratic pairing * ||phi||_inf is
// treated as a vanishing denominator.
constexpr double kDegenerateRatio = 1e-12;
// Divergence guard on the iterate amplitude, in units of c.
constexpr double kBlowUpFactor = 1e6;

struct Pairings {
  Complex quadratic;
  Complex cubic;
};

Pairings pair_spectra(std::span<const Complex> denominator, std::span<const Complex> phi_hat,
                      std::span<const Complex> square_hat) {
  Pairings p{0.0, 0.0};
  for (std::size_t i = 0; i < phi_hat.size(); ++i) {
    p.quadratic += denominator[i] * std::norm(phi_hat[i]);
    p.cubic += square_hat[i] * std::conj(phi_hat[i]);
  }
  return p;
}

double factor_from_pairings(const Pairings& p, double amplitude) {
  const double quad = p.quadratic.real();
  const double cubic = p.cubic.real();
  if (!(std::abs(cubic) > kDegenerateRatio * std::abs(quad) * amplitude)) {
    std::ostringstream os;
    os << "stabilizing factor: cubic pairing " << cubic << " vanishes against quadratic pairing "
       << quad;
    throw Error(ErrorCode::degenerate_iterate, os.str());
  }
  if (std::abs(p.quadratic.imag()) > kPairingImagTolerance * std::abs(quad) ||
      std::abs(p.cubic.imag()) > kPairingImagTolerance * std::abs(cubic)) {
    std::ostringstream os;
    os << "stabilizing factor: pairings not real (quadratic " << p.quadratic << ", cubic "
       << p.cubic << ")";
    throw Error(ErrorCode::symmetry_violation, os.str());
  }
  return quad / cubic;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  params.validate();
  if (params.sigma != -1) {
    throw Error(ErrorCode::unsupported_equation,
                "sigma: +1 (fKP-II) admits no lump solutions; only sigma = -1 is supported");
  }
  if (!allow_supercritical && !(params.alpha > kEnergyCriticalAlpha)) {
    std::ostringstream os;
    os << "alpha: " << params.alpha
       << " is at or below 4/5, where no lump solutions exist (pass allow-supercritical to run anyway)";
    fail(os.str());
  }
  if (!(tol > 0.0)) fail("tol: must be positive");
  if (max_iter < 1) fail("max-iter: must be at least 1");
  if (!std::isfinite(nu)) fail("nu: must be finite");
  if (seed.amplitude && (*seed.amplitude == 0.0 || !std::isfinite(*seed.amplitude))) {
    fail("seed-amplitude: must be finite and nonzero");
  }
  if (!(seed.width > 0.0)) fail("seed-width: must be positive");
  if (seed.kind == SeedKind::file && seed.path.empty()) fail("seed: file seed needs a path");
}

RealField make_seed(const SolverConfig& config) {
  const double c = config.params.c;
  switch (config.seed.kind) {
    case SeedKind::gaussian:
      return gaussian_seed(config.grid, config.seed.amplitude.value_or(3.0 * c), config.seed.width);
    case SeedKind::exact_kp1:
      return exact_kp1_lump(config.grid, {c, 0.0});
    case SeedKind::file: {
      auto stored = io::load_field(config.seed.path);
      if (!(stored.field.grid() == config.grid)) {
        throw Error(ErrorCode::dimension_mismatch,
                    "seed: grid of " + config.seed.path + " differs from the configured grid");
      }
      return std::move(stored.field);
    }
  }
  throw Error(ErrorCode::invalid_argument, "seed: unknown kind");
}

// 3/2-padded evaluation of phi^2 from the spectrum of phi.
struct PetviashviliIteration::Padded {
  std::size_t nx, ny;
  fftw_complex* buf;
  fftw_plan fwd, inv;

  explicit Padded(const SpectralGrid& g) : nx(g.nx() * 3 / 2), ny(g.ny() * 3 / 2) {
    buf = fftw_alloc_complex(nx * ny);
    fwd = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, FFTW_FORWARD,
                           FFTW_ESTIMATE);
    inv = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  }
  ~Padded() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(buf);
  }

  static std::size_t slot(long k, std::size_t n) {
    return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<long>(n));
  }

  // Spectra carry the origin phase (-1)^k~ on both grids, which cancels in the
  // product; it is stripped and restored around the plain DFTs.
  void square(const SpectralGrid& g, std::span<const Complex> phi_hat, std::span<Complex> out) {
    auto* b = reinterpret_cast<Complex*>(buf);
    std::fill(b, b + nx * ny, Complex(0.0));
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const long s2 = SpectralGrid::signed_index(ky, g.ny());
      for (std::size_t kx = 0; kx < g.nx(); ++kx) {
        const long s1 = SpectralGrid::signed_index(kx, g.nx());
        const double sign = ((s1 + s2) & 1L) ? -1.0 : 1.0;
        b[slot(s2, ny) * nx + slot(s1, nx)] = sign * phi_hat[g.index(kx, ky)];
      }
    }
    fftw_execute(inv);
    const double to_values = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < nx * ny; ++i) {
      const double v = b[i].real() * to_values;
      b[i] = v * v;
    }
    fftw_execute(fwd);
    const double back = static_cast<double>(g.size()) / static_cast<double>(nx * ny);
    for (std::size_t ky = 0; ky < g.ny(); ++ky) {
      const long s2 = SpectralGrid::signed_index(ky, g.ny());
      for (std::size_t kx = 0; kx < g.nx(); ++kx) {
        const long s1 = SpectralGrid::signed_index(kx, g.nx());
        const double sign = ((s1 + s2) & 1L) ? -1.0 : 1.0;
        out[g.index(kx, ky)] = sign * back * b[slot(s2, ny) * nx + slot(s1, nx)];
      }
    }
  }
};

PetviashviliIteration::PetviashviliIteration(const SpectralGrid& grid, const SymbolParams& p,
                                             double nu, bool dealias)
    : grid_(grid), params_(p), nu_(nu), fft_(grid) {
  const auto denom = petviashvili_denominator(grid, p);
  denominator_.assign(denom.values().begin(), denom.values().end());
  residual_weight_.resize(grid.size());
  xi1_sq_.resize(grid.size());
  for (std::size_t ky = 0; ky < grid.ny(); ++ky) {
    const double k2 = grid.xi2(ky);
    for (std::size_t kx = 0; kx < grid.nx(); ++kx) {
      const double k1 = grid.xi1(kx);
      const std::size_t i = grid.index(kx, ky);
      residual_weight_[i] = p.c * k1 * k1 + std::pow(std::abs(k1), p.alpha + 2.0) + k2 * k2;
      xi1_sq_[i] = k1 * k1;
    }
  }
  phi_.assign(grid.size(), 0.0);
  spectrum_.assign(grid.size(), 0.0);
  square_.assign(grid.size(), 0.0);
  work_.assign(grid.size(), 0.0);
  real_work_.assign(grid.size(), 0.0);
  if (dealias) padded_ = std::make_unique<Padded>(grid);
}

PetviashviliIteration::~PetviashviliIteration() = default;

void PetviashviliIteration::reset(const RealField& phi) {
  if (!(phi.grid() == grid_)) {
    throw Error(ErrorCode::dimension_mismatch, "iteration: field grid differs from solver grid");
  }
  fft_.forward(phi.values(), spectrum_);
  detail::project_zero_mass(grid_, spectrum_);
  fft_.inverse_real(spectrum_, phi_);
  evaluated_ = false;
}

void PetviashviliIteration::square_spectrum() {
  if (padded_) {
    padded_->square(grid_, spectrum_, square_);
    return;
  }
  for (std::size_t i = 0; i < phi_.size(); ++i) real_work_[i] = phi_[i] * phi_[i];
  fft_.forward(std::span<const double>(real_work_), square_);
}

IterationRecord PetviashviliIteration::evaluate() {
  square_spectrum();
  double amplitude = 0.0;
  for (double v : phi_) amplitude = std::max(amplitude, std::abs(v));
  m_factor_ = factor_from_pairings(pair_spectra(denominator_, spectrum_, square_), amplitude);

  detail::residual_spectrum(
      grid_, spectrum_, square_, [&](double, double, std::size_t i) { return residual_weight_[i]; },
      work_);
  fft_.inverse(work_, work_);

  IterationRecord rec;
  rec.m_factor = m_factor_;
  rec.factor_error = std::abs(1.0 - m_factor_);
  rec.residual = detail::max_abs_real(work_);
  evaluated_ = true;
  return rec;
}

double PetviashviliIteration::advance() {
  if (!evaluated_) evaluate();
  const double gain = std::pow(m_factor_, nu_);
  if (!std::isfinite(gain)) {
    throw Error(ErrorCode::divergence, "iteration: M^nu is not finite");
  }
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    spectrum_[i] = gain * square_[i] / denominator_[i];
  }
  fft_.inverse_real(spectrum_, real_work_);
  double change = 0.0;
  for (std::size_t i = 0; i < phi_.size(); ++i) {
    const double v = real_work_[i];
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "iteration: non-finite value at node " << i;
      throw Error(ErrorCode::divergence, os.str());
    }
    change = std::max(change, std::abs(v - phi_[i]));
    phi_[i] = v;
  }
  evaluated_ = false;
  return change;
}

double stabilizing_factor(const RealField& phi, const SymbolParams& p) {
  const SpectralGrid& g = phi.grid();
  FourierTransform fft(g);
  std::vector<Complex> phi_hat(g.size());
  fft.forward(phi.values(), phi_hat);
  detail::project_zero_mass(g, phi_hat);
  std::vector<double> projected(g.size());
  fft.inverse_real(phi_hat, projected);
  for (double& v : projected) v *= v;
  std::vector<Complex> square_hat(g.size());
  fft.forward(std::span<const double>(projected), square_hat);
  const auto denom = petviashvili_denominator(g, p);
  return factor_from_pairings(pair_spectra(denom.values(), phi_hat, square_hat), phi.max_abs());
}

std::pair<RealField, double> petviashvili_step(const RealField& phi, const SymbolParams& p,
                                               double nu) {
  PetviashviliIteration it(phi.grid(), p, nu);
  it.reset(phi);
  const double m = it.evaluate().m_factor;
  it.advance();
  return {it.field(), m};
}

SolveResult solve(const SolverConfig& config) {
  config.validate();
  PetviashviliIteration it(config.grid, config.params, config.nu, config.dealias);
  it.reset(make_seed(config));

  IterationReport report;
  report.records.reserve(static_cast<std::size_t>(config.max_iter));
  it.evaluate();
  const double blow_up = kBlowUpFactor * config.params.c;
  for (int n = 1; n <= config.max_iter; ++n) {
    IterationRecord rec;
    try {
      const double change = it.advance();
      double amplitude = 0.0;
      for (double v : it.phi()) amplitude = std::max(amplitude, std::abs(v));
      if (amplitude > blow_up) {
        std::ostringstream os;
        os << "iterate amplitude " << amplitude << " exceeds " << blow_up;
        throw Error(ErrorCode::divergence, os.str());
      }
      rec = it.evaluate();
      rec.iter_error = change;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::divergence) throw;
      report.status = SolveStatus::diverged;
      report.message = e.what();
      break;
    }
    rec.iter = n;
    report.records.push_back(rec);
    if (!std::isfinite(rec.residual) || !std::isfinite(rec.m_factor)) {
      report.status = SolveStatus::diverged;
      report.message = "non-finite monitor";
      break;
    }
    if (rec.iter_error <= config.tol && rec.factor_error <= config.tol &&
        rec.residual <= config.tol) {
      report.status = SolveStatus::converged;
      break;
    }
  }
  if (report.status == SolveStatus::diverged) {
    // The last iterate may hold non-finite values; hand back the seed grid's zero field.
    bool finite = std::all_of(it.phi().begin(), it.phi().end(), [](double v) { return std::isfinite(v); });
    if (!finite) return {RealField::zeros(config.grid), std::move(report)};
  }
  return {it.field(), std::move(report)};
}

}  // namespace fkp
