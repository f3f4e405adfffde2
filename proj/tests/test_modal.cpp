#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgt/modal.hpp"

using namespace wgt;

namespace {

constexpr double kPi = std::numbers::pi;

struct Setup {
  Mesh mesh;
  DofMap dofs;
  ModalTraceMap map;
};

Setup strip(double h, int modes) {
  const auto geom = build_junction(fixtures::straight_strip());
  Setup s{generate_mesh(truncate(geom, 0.0), h), {}, {}};
  s.dofs = make_dofmap(s.mesh);
  s.map = build_modal_maps(s.mesh, s.dofs, outlet_spectra(geom, modes), modes);
  return s;
}

}  // namespace

TEST_CASE("hat-sine integrals match quadrature") {
  const double a = 0.2, b = 0.45, k = 3.0 * kPi;
  for (bool rising : {true, false}) {
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = a + (i + 0.5) * (b - a) / n;
      const double hat = rising ? (y - a) / (b - a) : (b - y) / (b - a);
      sum += hat * std::sin(k * y);
    }
    CHECK(hat_sine_integral(a, b, k, rising) == doctest::Approx(sum * (b - a) / n).epsilon(1e-7));
  }
}

TEST_CASE("channel numbering is outlet-major") {
  const Setup s = strip(0.25, 3);
  CHECK(s.map.outlets() == 2);
  CHECK(s.map.channels() == 6);
  CHECK(s.map.channel(1, 2) == 4);
  CHECK(s.map.stacked().rows() == 6);
  CHECK(s.map.stacked().cols() == s.dofs.size());
}

TEST_CASE("face traces of interpolated modes give Fourier coefficients") {
  const Setup s = strip(1.0 / 32.0, 4);
  const double c = std::sqrt(2.0);
  const Vector u = interpolate(s.mesh, s.dofs, [&](Vec2 p) { return c * std::sin(2.0 * kPi * p.y) + 0.5 * c * std::sin(kPi * p.y); });
  // the two faces run y in opposite directions, so odd modes flip sign
  CHECK(s.map.coefficients(0, u)(1) * s.map.coefficients(1, u)(1) < 0.0);
  for (int n = 0; n < 2; ++n) {
    const Eigen::VectorXd a = s.map.coefficients(n, u);
    CHECK(a(0) == doctest::Approx(0.5).epsilon(5e-3));
    CHECK(std::abs(a(1)) == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(std::abs(a(2)) < 1e-3);
    CHECK(std::abs(a(3)) < 1e-3);
  }
}

TEST_CASE("modal map of a piecewise linear trace is exact") {
  // a single hat on the face: compare against direct integration of hat * Phi_1
  const Setup s = strip(0.25, 2);
  const FaceDofs& f = s.dofs.face(0);
  const int mid = 2;
  REQUIRE(f.dofs[mid] >= 0);
  Vector u = Vector::Zero(s.dofs.size());
  u(f.dofs[mid]) = 1.0;
  const double y0 = f.y[mid - 1], y1 = f.y[mid], y2 = f.y[mid + 1];
  const double expected = std::sqrt(2.0) * (hat_sine_integral(y0, y1, kPi, true) + hat_sine_integral(y1, y2, kPi, false));
  CHECK(s.map.coefficients(0, u)(0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.map.coefficients(1, u).norm() == 0.0);
}
