#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fkp {

using Complex = std::complex<double>;

/// Periodic rectangle [-lx, lx) x [-ly, ly) sampled on nx x ny nodes.
///
/// Node j in x sits at x_j = -lx + j * (2 lx / nx); the signed wavenumber
/// index k~ in {-nx/2, ..., nx/2 - 1} maps to xi_1 = pi * k~ / lx. Storage of
/// every field on the grid is row-major with x varying fastest:
/// index = iy * nx + ix.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t nx, std::size_t ny, double lx, double ly);

  /// Square grid: n x n nodes on [-l, l)^2.
  static SpectralGrid square(std::size_t n, double l) { return {n, n, l, l}; }

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  std::size_t size() const noexcept { return nx_ * ny_; }

  double dx() const noexcept { return 2.0 * lx_ / static_cast<double>(nx_); }
  double dy() const noexcept { return 2.0 * ly_ / static_cast<double>(ny_); }
  double cell_area() const noexcept { return dx() * dy(); }

  double x(std::size_t ix) const noexcept { return -lx_ + static_cast<double>(ix) * dx(); }
  double y(std::size_t iy) const noexcept { return -ly_ + static_cast<double>(iy) * dy(); }

  std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * nx_ + ix; }

  /// Signed mode number of transform-order slot k for an axis of n nodes.
  static long signed_index(std::size_t k, std::size_t n) noexcept {
    return k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
  }

  double xi1(std::size_t kx) const noexcept;
  double xi2(std::size_t ky) const noexcept;

  bool operator==(const SpectralGrid& other) const noexcept = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
  double lx_;
  double ly_;
};

struct Wavenumbers {
  std::vector<double> xi1;
  std::vector<double> xi2;
};

/// Signed physical wavenumbers in transform order.
Wavenumbers wavenumbers(const SpectralGrid& grid);

/// Real samples of a field. All values are finite.
class RealField {
 public:
  RealField(SpectralGrid grid, std::vector<double> values);

  static RealField zeros(const SpectralGrid& grid) {
    return {grid, std::vector<double>(grid.size(), 0.0)};
  }

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(std::size_t ix, std::size_t iy) const noexcept {
    return values_[grid_.index(ix, iy)];
  }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double max_abs() const noexcept;

  /// Moves the sample buffer out, leaving the field empty.
  std::vector<double> release() && { return std::move(values_); }

 private:
  SpectralGrid grid_;
  std::vector<double> values_;
};

/// Discrete Fourier coefficients in transform order (row-major, k_x fastest).
///
/// Coefficients are phase-referenced to the physical origin, so a field that
/// is even in x and y has real coefficients.
class SpectralField {
 public:
  SpectralField(SpectralGrid grid, std::vector<Complex> coeffs);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex operator()(std::size_t kx, std::size_t ky) const noexcept {
    return coeffs_[grid_.index(kx, ky)];
  }
  Complex operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  std::vector<Complex> release() && { return std::move(coeffs_); }

 private:
  SpectralGrid grid_;
  std::vector<Complex> coeffs_;
};

/// Relative tolerance on the imaginary residue accepted by inverse transforms.
inline constexpr double kSymmetryTolerance = 1e-10;

/// Unnormalized forward DFT. Throws ErrorCode::invalid_field on non-finite input.
SpectralField forward_transform(const RealField& f);

/// Inverse DFT with 1/(nx ny) normalization. The imaginary residue must stay
/// below kSymmetryTolerance relative to the largest modulus, otherwise
/// ErrorCode::symmetry_violation is thrown.
RealField inverse_transform(const SpectralField& g);

/// Reusable FFTW plans and aligned buffers for one grid.
///
/// The solver and the other hot loops hold one of these for the lifetime of
/// a run; the free functions above build a temporary one per call.
class FourierTransform {
 public:
  explicit FourierTransform(const SpectralGrid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const SpectralGrid& grid() const noexcept { return grid_; }

  /// out[k] = sum_j in[j] exp(-i xi_k . x_j), x_j the physical node positions.
  void forward(std::span<const double> in, std::span<Complex> out);
  void forward(std::span<const Complex> in, std::span<Complex> out);
  /// Complex inverse including the 1/(nx ny) factor.
  void inverse(std::span<const Complex> in, std::span<Complex> out);
  /// Real part of the inverse; returns the largest imaginary residue seen.
  double inverse_real(std::span<const Complex> in, std::span<double> out);

 private:
  void apply_origin_phase(std::span<Complex> data) const;

  SpectralGrid grid_;
  void* buffer_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Caps the thread count used by FFTW plans created afterwards.
/// Reads FKP_THREADS when called with 0.
void set_transform_threads(int threads = 0);

}  // namespace fkp
