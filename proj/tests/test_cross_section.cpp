#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgt/cross_section.hpp"
#include "wgt/error.hpp"

using namespace wgt;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("interval spectrum has the closed form") {
  const auto s = interval_spectrum(2.0, 3);
  REQUIRE(s.modes() == 3);
  CHECK(s.eigenvalues[0] == doctest::Approx(kPi * kPi / 4.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(9.0 * kPi * kPi / 4.0));
  CHECK(interval_spectrum(1.0, 1).eigenvalues[0] == doctest::Approx(kPi * kPi));
}

TEST_CASE("eigenfunctions are orthonormal on the interval") {
  const auto s = interval_spectrum(0.7, 4);
  const int n = 4000;
  for (int p = 1; p <= 4; ++p)
    for (int q = p; q <= 4; ++q) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) * 0.7 / n;
        sum += s.eigenfunction(p, y) * s.eigenfunction(q, y);
      }
      CHECK(sum * 0.7 / n == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-6));
    }
  const double y = 0.3, d = 1e-6;
  CHECK(s.eigenfunction_dy(2, y) == doctest::Approx((s.eigenfunction(2, y + d) - s.eigenfunction(2, y - d)) / (2 * d)).epsilon(1e-6));
}

TEST_CASE("threshold picks the widest outlets") {
  JunctionSpec spec;
  spec.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 1.0}, {0.0, 1.0}};
  spec.outlets = {{4, 1}, {1, 2}};
  const auto geom = build_junction(spec);
  const ThresholdInfo info = threshold(outlet_spectra(geom, 3));
  CHECK(info.lambda == doctest::Approx(kPi * kPi));
  CHECK(info.count == 1);
  CHECK(info.is_threshold[0]);
  CHECK_FALSE(info.is_threshold[1]);
  CHECK(info.order.front() == 0);
  CHECK(info.kappa[0][0] == std::complex<double>(0.0, -1.0));
  // narrow outlet: kappa_1 = sqrt(4 pi^2 - pi^2)
  CHECK(info.kappa[1][0].real() == doctest::Approx(std::sqrt(3.0) * kPi));
  CHECK(info.kappa[1][0].imag() == 0.0);
  CHECK(info.kappa_modulus(0, 2) == doctest::Approx(std::sqrt(3.0) * kPi));
  CHECK(info.spectral_gap == doctest::Approx(3.0 * kPi * kPi));
}

TEST_CASE("equal widths are all threshold outlets") {
  const ThresholdInfo info = threshold(outlet_spectra(build_junction(fixtures::cross()), 2));
  CHECK(info.count == 4);
  CHECK(info.threshold_outlets().size() == 4);
}

TEST_CASE("a narrower stem is not a threshold outlet") {
  const ThresholdInfo half = threshold(outlet_spectra(build_junction(fixtures::t_junction_stem(0.5)), 2));
  CHECK(half.count == 2);
  CHECK(half.lambda == doctest::Approx(kPi * kPi));
  CHECK(half.kappa[2][0].real() == doctest::Approx(std::sqrt(3.0) * kPi));
}
