#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fkp/error.hpp"
#include "fkp/grid.hpp"
#include "fkp/reference.hpp"
#include "support.hpp"

using namespace fkp;
using fkp::test::random_field;
using fkp::test::sample;
using fkp::test::code_of;

TEST_SUITE("grid") {

TEST_CASE("grid rejects bad sizes and widths") {
  CHECK(code_of([] { SpectralGrid(6, 8, 1.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SpectralGrid(8, 12, 1.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SpectralGrid(8, 8, 0.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { SpectralGrid(8, 8, 1.0, -2.0); }) == ErrorCode::invalid_argument);
  CHECK_NOTHROW(SpectralGrid(8, 16, 1.0, 3.0));
}

TEST_CASE("node coordinates") {
  const SpectralGrid g(16, 8, 4.0, 2.0);
  CHECK(g.x(0) == -4.0);
  CHECK(g.dx() == 0.5);
  CHECK(g.x(8) == doctest::Approx(0.0));
  CHECK(g.y(7) == doctest::Approx(1.5));
  CHECK(g.index(3, 2) == 2 * 16 + 3);
}

TEST_CASE("wavenumbers follow the signed index convention") {
  const auto w = wavenumbers(SpectralGrid::square(8, std::numbers::pi));
  const std::vector<double> expected{0, 1, 2, 3, -4, -3, -2, -1};
  REQUIRE(w.xi1.size() == 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(w.xi1[k] == doctest::Approx(expected[k]).epsilon(1e-14));

  const auto w4 = wavenumbers(SpectralGrid::square(8, 4.0));
  for (std::size_t k = 1; k < 4; ++k) {
    CHECK(w4.xi1[k] - w4.xi1[k - 1] == doctest::Approx(std::numbers::pi / 4));
  }

  const SpectralGrid big(8192, 8, 1024.0, 1.0);
  CHECK(big.xi1(1) == doctest::Approx(3.068e-3).epsilon(1e-3));
  CHECK(big.xi1(1) == doctest::Approx(std::numbers::pi / 1024));
}

TEST_CASE("constant field is pure DC") {
  const SpectralGrid g(16, 8, 3.0, 5.0);
  const auto spec = forward_transform(RealField(g, std::vector<double>(g.size(), 1.0)));
  CHECK(spec(0, 0).real() == doctest::Approx(16.0 * 8.0));
  double rest = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) rest = std::max(rest, std::abs(spec[i]));
  CHECK(rest < 1e-12);
}

TEST_CASE("single cosine mode has two coefficients of N/2") {
  const SpectralGrid g(32, 16, 2.5, 1.0);
  const auto f = sample(g, [&](double x, double) { return std::cos(std::numbers::pi * x / g.lx()); });
  const auto spec = forward_transform(f);
  const double half = 0.5 * static_cast<double>(g.size());
  CHECK(std::abs(spec(1, 0) - half) < 1e-10);
  CHECK(std::abs(spec(31, 0) - half) < 1e-10);
  double rest = 0.0;
  for (std::size_t ky = 0; ky < g.ny(); ++ky) {
    for (std::size_t kx = 0; kx < g.nx(); ++kx) {
      if (ky == 0 && (kx == 1 || kx == 31)) continue;
      rest = std::max(rest, std::abs(spec(kx, ky)));
    }
  }
  CHECK(rest < 1e-10);
}

TEST_CASE("inverse of simple spectra") {
  const SpectralGrid g = SpectralGrid::square(8, 1.0);
  const auto zero = inverse_transform(SpectralField(g, std::vector<Complex>(g.size())));
  CHECK(zero.max_abs() == 0.0);
  std::vector<Complex> dc(g.size());
  dc[0] = static_cast<double>(g.size());
  const auto one = inverse_transform(SpectralField(g, dc));
  for (double v : one.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("round trip of a random field") {
  const SpectralGrid g = SpectralGrid::square(64, 7.0);
  const auto f = random_field(g, 1);
  const auto back = inverse_transform(forward_transform(f));
  CHECK(test::max_diff(f, back) <= 1e-12 * f.max_abs());
}

TEST_CASE("round trip of the exact lump") {
  const SpectralGrid g = SpectralGrid::square(256, 64.0);
  const auto f = exact_kp1_lump(g);
  CHECK(test::max_diff(f, inverse_transform(forward_transform(f))) <= 1e-12 * f.max_abs());
}

TEST_CASE("Parseval identity") {
  const SpectralGrid g(64, 32, 3.0, 9.0);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto f = random_field(g, seed);
    const auto spec = forward_transform(f);
    double real_sum = 0.0, spec_sum = 0.0;
    for (double v : f.values()) real_sum += v * v;
    for (const Complex& z : spec.coeffs()) spec_sum += std::norm(z);
    real_sum *= g.cell_area();
    spec_sum *= g.cell_area() / static_cast<double>(g.size());
    CHECK(std::abs(real_sum - spec_sum) <= 1e-10 * real_sum);
  }
}

TEST_CASE("forward transform is linear") {
  const SpectralGrid g = SpectralGrid::square(32, 2.0);
  const auto f = random_field(g, 11);
  const auto h = random_field(g, 12);
  const double a = 1.7, b = -0.3;
  std::vector<double> mix(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mix[i] = a * f[i] + b * h[i];
  const auto lhs = forward_transform(RealField(g, mix));
  const auto sf = forward_transform(f);
  const auto sh = forward_transform(h);
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    scale = std::max(scale, std::abs(lhs[i]));
    err = std::max(err, std::abs(lhs[i] - (a * sf[i] + b * sh[i])));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("shift by one cell multiplies by the exact phase") {
  const SpectralGrid g(32, 16, 4.0, 2.0);
  const auto f = random_field(g, 5);
  // g(x) = f(x - dx): node ix takes the value of node ix - 1.
  std::vector<double> shifted(g.size());
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      shifted[g.index(ix, iy)] = f(ix == 0 ? g.nx() - 1 : ix - 1, iy);
    }
  }
  const auto a = forward_transform(f);
  const auto b = forward_transform(RealField(g, shifted));
  double err = 0.0, scale = 0.0;
  for (std::size_t ky = 0; ky < g.ny(); ++ky) {
    for (std::size_t kx = 0; kx < g.nx(); ++kx) {
      const Complex phase = std::polar(1.0, -g.xi1(kx) * g.dx());
      scale = std::max(scale, std::abs(a(kx, ky)));
      err = std::max(err, std::abs(b(kx, ky) - phase * a(kx, ky)));
    }
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("spectrum of a real field is conjugate symmetric; even fields have real spectra") {
  const SpectralGrid g = SpectralGrid::square(16, 3.0);
  const auto spec = forward_transform(random_field(g, 3));
  for (std::size_t ky = 0; ky < g.ny(); ++ky) {
    for (std::size_t kx = 0; kx < g.nx(); ++kx) {
      const Complex mirror = spec((g.nx() - kx) % g.nx(), (g.ny() - ky) % g.ny());
      CHECK(std::abs(spec(kx, ky) - std::conj(mirror)) < 1e-12);
    }
  }
  const auto even = forward_transform(exact_kp1_lump(g));
  for (const Complex& z : even.coeffs()) CHECK(std::abs(z.imag()) < 1e-12);
}

TEST_CASE("field invariants") {
  const SpectralGrid g = SpectralGrid::square(8, 1.0);
  CHECK(code_of([&] { RealField(g, std::vector<double>(10)); }) == ErrorCode::dimension_mismatch);
  std::vector<double> bad(g.size(), 0.0);
  bad[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { RealField(g, bad); }) == ErrorCode::invalid_field);
  bad[5] = std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { RealField(g, bad); }) == ErrorCode::invalid_field);
}

TEST_CASE("asymmetric spectrum is rejected by the inverse") {
  const SpectralGrid g = SpectralGrid::square(8, 1.0);
  std::vector<Complex> spec(g.size());
  spec[g.index(1, 0)] = 4.0;  // no partner at (-1, 0)
  CHECK(code_of([&] { inverse_transform(SpectralField(g, spec)); }) ==
        ErrorCode::symmetry_violation);
}

TEST_CASE("transforms are deterministic") {
  const SpectralGrid g = SpectralGrid::square(128, 5.0);
  const auto f = random_field(g, 9);
  const auto a = forward_transform(f);
  const auto b = forward_transform(f);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(a[i] == b[i]);
}

}
