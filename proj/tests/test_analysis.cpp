#include <doctest.h>

#include <cmath>

#include "fkp/analysis.hpp"
#include "fkp/reference.hpp"
#include "support.hpp"

using namespace fkp;
using fkp::test::code_of;

TEST_SUITE("analysis") {

TEST_CASE("cross sections of the exact lump") {
  const double s3 = std::sqrt(3.0);
  const SpectralGrid g = SpectralGrid::square(16, 8.0 * s3);
  const auto e = exact_kp1_lump(g);
  const auto sx = cross_section(e, Axis::x);
  const auto sy = cross_section(e, Axis::y);
  REQUIRE(sx.size() == g.nx());
  REQUIRE(sy.size() == g.ny());
  CHECK(sx[8].coordinate == 0.0);
  CHECK(sx[8].value == 8.0);
  CHECK(sy[8].value == 8.0);
  CHECK(sx[9].coordinate == doctest::Approx(s3));
  CHECK(std::abs(sx[9].value) < 1e-14);
  for (const auto& pt : sy) CHECK(pt.value > 0.0);
  // The line nearest to y = 0.4 dx is y = 0.
  const auto near = cross_section(e, Axis::x, 0.4 * s3);
  CHECK(near[8].value == 8.0);
  const auto off = cross_section(e, Axis::x, s3);
  CHECK(off[8].value == doctest::Approx(8.0 * 2.0 / 4.0));  // (1 + 1)/(1 + 1)^2
  CHECK(code_of([&] { cross_section(e, Axis::y, 100.0); }) == ErrorCode::out_of_range);
}

TEST_CASE("symmetry report") {
  const SpectralGrid g = SpectralGrid::square(64, 16.0);
  const auto sym = symmetry_report(exact_kp1_lump(g));
  CHECK(sym.x_defect <= 1e-12);
  CHECK(sym.y_defect <= 1e-12);
  // x e^{-x^2 - y^2} is odd in x: the defect is 2 max|phi| / max|phi|.
  const auto odd = test::sample(g, [](double x, double y) { return x * std::exp(-x * x - y * y); });
  const auto r = symmetry_report(odd);
  CHECK(r.x_defect == doctest::Approx(2.0));
  CHECK(r.y_defect <= 1e-12);
  const auto zero = symmetry_report(RealField::zeros(g));
  CHECK(zero.x_defect == 0.0);
}

TEST_CASE("algebraic plateaus of the exact lump") {
  const SpectralGrid g = SpectralGrid::square(1024, 256.0);
  const auto e = exact_kp1_lump(g);
  const auto px = decay_profile(e, Axis::x);
  const auto py = decay_profile(e, Axis::y);
  CHECK(px.window_lo == doctest::Approx(64.0));
  CHECK(px.window_hi == doctest::Approx(128.0));
  CHECK(px.plateau_value == doctest::Approx(-24.0).epsilon(0.1));
  CHECK(py.plateau_value == doctest::Approx(24.0).epsilon(0.1));
  CHECK(px.plateau_rel_variation <= 0.1);
  CHECK(py.plateau_rel_variation <= 0.1);
  CHECK(px.radii.size() == px.products.size());

  const auto e2 = exact_kp1_lump(g, {2.0, 0.0});
  CHECK(decay_profile(e2, Axis::y).plateau_value == doctest::Approx(12.0).epsilon(0.1));
  CHECK(decay_profile(e2, Axis::x).plateau_value == doctest::Approx(-24.0).epsilon(0.1));  // independent of c
}

TEST_CASE("plateaus tighten on a larger domain") {
  const SpectralGrid g = SpectralGrid::square(4096, 1024.0);
  const auto e = exact_kp1_lump(g);
  CHECK(decay_profile(e, Axis::x).plateau_value == doctest::Approx(-24.0).epsilon(0.03));
  CHECK(decay_profile(e, Axis::y).plateau_value == doctest::Approx(24.0).epsilon(0.03));
}

TEST_CASE("first-power profile") {
  const SpectralGrid g = SpectralGrid::square(256, 64.0);
  const auto p = decay_profile(exact_kp1_lump(g), Axis::y, 1.0);
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    const double y = p.radii[i];
    const double q = 1.0 + y * y / 3.0;
    CHECK(p.products[i] == doctest::Approx(y * 8.0 * q / (q * q)).epsilon(1e-12));
  }
}

TEST_CASE("peakedness") {
  const SpectralGrid g = SpectralGrid::square(32, 8.0);
  const auto e = exact_kp1_lump(g);
  const auto one = peakedness({{2.0, e}});
  REQUIRE(one.size() == 1);
  CHECK(one[0].alpha == 2.0);
  CHECK(one[0].amplitude == 8.0);

  const auto peaks = peakedness({{2.0, test::small_solution(2.0).phi}, {1.7, test::small_solution(1.7).phi}});
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].alpha == 2.0);
  CHECK(peaks[1].amplitude > peaks[0].amplitude);
}

}
