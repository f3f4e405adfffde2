#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgt/error.hpp"
#include "wgt/param_sweep.hpp"

using namespace wgt;

namespace {

constexpr double kPi = std::numbers::pi;

Complex unit(double phase) { return std::polar(1.0, phase); }

ErrorCode match_error(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  try {
    match_branches(a, b);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("offset from -1 wraps around the circle") {
  CHECK(offset_from_minus_one(kPi) == doctest::Approx(0.0));
  CHECK(offset_from_minus_one(3.0 * kPi + 0.1) == doctest::Approx(0.1));
  CHECK(offset_from_minus_one(-kPi - 0.2) == doctest::Approx(-0.2));
}

TEST_CASE("branches follow the nearest phase") {
  const std::vector<Complex> prev{unit(0.1), unit(2.0)};
  const auto m = match_branches(prev, {unit(2.1), unit(0.05)});
  CHECK(std::arg(m[0]) == doctest::Approx(0.05));
  CHECK(std::arg(m[1]) == doctest::Approx(2.1));
  // across the branch cut of arg
  const auto w = match_branches({unit(3.1)}, {unit(-3.1)});
  CHECK(std::arg(w[0]) == doctest::Approx(-3.1));
}

TEST_CASE("tracking is lost on large jumps or a changed channel count") {
  CHECK(match_error({unit(0.0)}, {unit(2.0)}) == ErrorCode::PhaseTrackingLost);
  CHECK(match_error({unit(0.0)}, {unit(0.0), unit(1.0)}) == ErrorCode::PhaseTrackingLost);
}

TEST_CASE("grid must be ascending") {
  ParamSweepConfig p;
  p.moves = {{1, 0, 1.0, 0.0}, {2, 0, 1.0, 0.0}};
  p.grid = {1.0, 0.5};
  CHECK_THROWS_AS(param_sweep(fixtures::straight_strip(), p, {}), Error);
  p.grid = {};
  CHECK_THROWS_AS(param_sweep(fixtures::straight_strip(), p, {}), Error);
}

TEST_CASE("strip length sweep keeps one eigenvalue at -1") {
  ParamSweepConfig p;
  p.moves = {{1, 0, 1.0, 0.0}, {2, 0, 1.0, 0.0}};
  p.grid = {0.75, 1.0, 1.5};
  ScatteringOptions o;
  o.modes = 8;
  const ParamSweepResult r = param_sweep(fixtures::straight_strip(), p, o);
  REQUIRE(r.samples.size() == 3);
  CHECK(r.persistent.size() == 1);
  CHECK(r.crossings.empty());
  for (const auto& s : r.samples) {
    CHECK(s.threshold_count == 2);
    REQUIRE(s.phases.size() == 2);
  }
  // the other eigenvalue is det(s) / (-1) = (3 + 4i)/5 at unit length
  const int other = 1 - r.persistent[0];
  CHECK(std::remainder(r.samples[1].phases[other] - std::arg(Complex(3.0, 4.0)), 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-3));
  for (std::size_t i = 1; i < r.samples.size(); ++i)
    CHECK(std::abs(r.samples[i].phases[other] - r.samples[i - 1].phases[other]) < 0.5 * kPi);
}
