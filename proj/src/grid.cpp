#include "fkp/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fkp/error.hpp"

namespace fkp {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int& configured_threads() {
  static int threads = 1;
  return threads;
}

bool threads_initialized = false;

void check_axis(std::size_t n, double l, const char* name) {
  if (n < 8 || !std::has_single_bit(n)) {
    std::ostringstream os;
    os << "grid: n" << name << " = " << n << " must be a power of two >= 8";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
  if (!(l > 0.0) || !std::isfinite(l)) {
    std::ostringstream os;
    os << "grid: l" << name << " = " << l << " must be positive and finite";
    throw Error(ErrorCode::invalid_argument, os.str());
  }
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_field: return "invalid-field";
    case ErrorCode::symmetry_violation: return "symmetry-violation";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::unsupported_equation: return "unsupported-equation";
    case ErrorCode::degenerate_iterate: return "degenerate-iterate";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::invalid_exponent: return "invalid-exponent";
    case ErrorCode::io_failure: return "io-failure";
    case ErrorCode::magic_mismatch: return "magic-mismatch";
    case ErrorCode::version_mismatch: return "version-mismatch";
    case ErrorCode::truncated_file: return "truncated-file";
  }
  return "unknown";
}

SpectralGrid::SpectralGrid(std::size_t nx, std::size_t ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  check_axis(nx, lx, "x");
  check_axis(ny, ly, "y");
}

double SpectralGrid::xi1(std::size_t kx) const noexcept {
  return std::numbers::pi * static_cast<double>(signed_index(kx, nx_)) / lx_;
}

double SpectralGrid::xi2(std::size_t ky) const noexcept {
  return std::numbers::pi * static_cast<double>(signed_index(ky, ny_)) / ly_;
}

Wavenumbers wavenumbers(const SpectralGrid& grid) {
  Wavenumbers w;
  w.xi1.resize(grid.nx());
  w.xi2.resize(grid.ny());
  for (std::size_t k = 0; k < grid.nx(); ++k) w.xi1[k] = grid.xi1(k);
  for (std::size_t k = 0; k < grid.ny(); ++k) w.xi2[k] = grid.xi2(k);
  return w;
}

RealField::RealField(SpectralGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    std::ostringstream os;
    os << "field: " << values_.size() << " values for a grid of " << grid_.size() << " nodes";
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "field: non-finite value at node " << i;
      throw Error(ErrorCode::invalid_field, os.str());
    }
  }
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SpectralField::SpectralField(SpectralGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    std::ostringstream os;
    os << "spectral field: " << coeffs_.size() << " coefficients for a grid of "
       << grid_.size() << " modes";
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

void set_transform_threads(int threads) {
  if (threads <= 0) {
    threads = 1;
    if (const char* env = std::getenv("FKP_THREADS")) {
      int parsed = std::atoi(env);
      if (parsed > 0) threads = parsed;
    }
  }
  std::lock_guard lock(planner_mutex());
  configured_threads() = threads;
}

FourierTransform::FourierTransform(const SpectralGrid& grid) : grid_(grid) {
  auto* buf = fftw_alloc_complex(grid.size());
  buffer_ = buf;
  std::lock_guard lock(planner_mutex());
  if (!threads_initialized) {
    fftw_init_threads();
    threads_initialized = true;
  }
  fftw_plan_with_nthreads(configured_threads());
  // FFTW_ESTIMATE keeps plans (and therefore results) deterministic.
  const int n0 = static_cast<int>(grid.ny());
  const int n1 = static_cast<int>(grid.nx());
  forward_plan_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(buffer_);
}

// exp(i xi_k lx) = (-1)^k~ because the first node sits at -lx; n is even so the
// parity of k~ equals the parity of the storage slot.
void FourierTransform::apply_origin_phase(std::span<Complex> data) const {
  const std::size_t nx = grid_.nx();
  const std::size_t ny = grid_.ny();
  for (std::size_t ky = 0; ky < ny; ++ky) {
    Complex* row = data.data() + ky * nx;
    for (std::size_t kx = (ky & 1U) ? 0 : 1; kx < nx; kx += 2) row[kx] = -row[kx];
  }
}

void FourierTransform::forward(std::span<const double> in, std::span<Complex> out) {
  auto* buf = reinterpret_cast<Complex*>(buffer_);
  for (std::size_t i = 0; i < grid_.size(); ++i) buf[i] = Complex(in[i], 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(buf, buf + grid_.size(), out.begin());
  apply_origin_phase(out);
}

void FourierTransform::forward(std::span<const Complex> in, std::span<Complex> out) {
  auto* buf = reinterpret_cast<Complex*>(buffer_);
  std::copy(in.begin(), in.end(), buf);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(buf, buf + grid_.size(), out.begin());
  apply_origin_phase(out);
}

void FourierTransform::inverse(std::span<const Complex> in, std::span<Complex> out) {
  auto* buf = reinterpret_cast<Complex*>(buffer_);
  std::copy(in.begin(), in.end(), buf);
  apply_origin_phase({buf, grid_.size()});
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) out[i] = buf[i] * scale;
}

double FourierTransform::inverse_real(std::span<const Complex> in, std::span<double> out) {
  auto* buf = reinterpret_cast<Complex*>(buffer_);
  std::copy(in.begin(), in.end(), buf);
  apply_origin_phase({buf, grid_.size()});
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  double residue = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    out[i] = buf[i].real() * scale;
    residue = std::max(residue, std::abs(buf[i].imag()) * scale);
  }
  return residue;
}

SpectralField forward_transform(const RealField& f) {
  FourierTransform fft(f.grid());
  std::vector<Complex> out(f.grid().size());
  fft.forward(f.values(), out);
  return {f.grid(), std::move(out)};
}

RealField inverse_transform(const SpectralField& g) {
  FourierTransform fft(g.grid());
  std::vector<double> out(g.grid().size());
  const double residue = fft.inverse_real(g.coeffs(), out);
  double scale = 0.0;
  for (const Complex& c : g.coeffs()) scale = std::max(scale, std::abs(c));
  scale /= static_cast<double>(g.grid().size());
  if (residue > kSymmetryTolerance * scale) {
    std::ostringstream os;
    os << "inverse transform: imaginary residue " << residue << " exceeds "
       << kSymmetryTolerance << " relative to coefficient scale " << scale;
    throw Error(ErrorCode::symmetry_violation, os.str());
  }
  return {g.grid(), std::move(out)};
}

}  // namespace fkp
