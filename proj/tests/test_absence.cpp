#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgt/absence.hpp"
#include "wgt/error.hpp"

using namespace wgt;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

SweepOptions options(int k = 3) {
  SweepOptions o;
  o.h = 0.1;
  o.levels = 2;
  o.k = k;
  return o;
}

}  // namespace

TEST_CASE("Neumann square at R = 0 gives 0, pi^2, pi^2") {
  const auto mu = mixed_eigenvalues(build_junction(fixtures::cross()), 0.0, options());
  CHECK(std::abs(mu.values[0]) < 5e-3 * kPi2);
  CHECK(mu.values[1] == doctest::Approx(kPi2).epsilon(5e-3));
  CHECK(mu.values[2] == doctest::Approx(kPi2).epsilon(5e-3));
  REQUIRE(mu.per_level.size() == 2);
  CHECK(mu.error_bars[1] == doctest::Approx(std::abs(mu.per_level[1][1] - mu.per_level[0][1])));
}

TEST_CASE("Dirichlet-bottom square at R = 0 gives pi^2/4, 5 pi^2/4") {
  const auto mu = mixed_eigenvalues(build_junction(fixtures::t_junction()), 0.0, options(2));
  CHECK(mu.values[0] == doctest::Approx(kPi2 / 4.0).epsilon(5e-3));
  CHECK(mu.values[1] == doctest::Approx(5.0 * kPi2 / 4.0).epsilon(5e-3));
}

TEST_CASE("straight strip at R = 1 separates to (m pi / 3)^2 + pi^2") {
  // 3 x 1 rectangle, Dirichlet on the long sides, Neumann on the short ends
  const auto mu = mixed_eigenvalues(build_junction(fixtures::straight_strip()), 1.0, options());
  for (int m = 0; m < 3; ++m) CHECK(mu.values[m] == doctest::Approx(kPi2 * (1.0 + m * m / 9.0)).epsilon(5e-3));
}

TEST_CASE("Dirichlet truncation bounds the mixed problem from above") {
  const auto geom = build_junction(fixtures::l_bend());
  const auto n = mixed_eigenvalues(geom, 1.0, options());
  const auto d = mixed_eigenvalues(geom, 1.0, options(), true);
  for (int j = 0; j < 3; ++j) CHECK(d.values[j] > n.values[j]);
}

TEST_CASE("eigenvalues below threshold grow with R") {
  for (const auto& spec : {fixtures::l_bend(), fixtures::t_junction()}) {
    const auto sweep = r_sweep(build_junction(spec), {0.0, 0.5, 1.0, 2.0}, options(2));
    CHECK(sweep.violations.empty());
    for (std::size_t i = 1; i < sweep.points.size(); ++i)
      if (sweep.points[i - 1].values[0] < sweep.lambda)
        CHECK(sweep.points[i].values[0] >= sweep.points[i - 1].values[0] - sweep.points[i - 1].error_bars[0]);
  }
}

TEST_CASE("T-junction is ABSENT(0)") {
  const auto geom = build_junction(fixtures::t_junction());
  const auto sweep = r_sweep(geom, default_R_grid(), options());
  const auto kappa = estimate_kappa(sweep, &geom, options());
  CHECK(kappa.kappa == 1);
  CHECK(kappa.consistent);
  CHECK(sweep.limits[0].value == doctest::Approx(0.8067 * kPi2).epsilon(1e-2));
  const auto v = absence_verdict(sweep, kappa.kappa);
  CHECK(v.absent);
  CHECK(v.R_star == 0.0);
  CHECK(v.margin > 3.0 * v.error_bar);
}

TEST_CASE("cross has one trapped curve and turns absent once mu_2 clears the threshold") {
  const auto geom = build_junction(fixtures::cross());
  const auto sweep = r_sweep(geom, default_R_grid(), options());
  const auto kappa = estimate_kappa(sweep, &geom, options());
  CHECK(kappa.kappa == 1);
  CHECK(sweep.limits[0].value < kPi2);
  CHECK(sweep.limits[0].value == doctest::Approx(0.6627 * kPi2).epsilon(1e-2));
  const auto v = absence_verdict(sweep, kappa.kappa);
  CHECK(v.absent);
  CHECK(v.R_star > 0.0);
}

TEST_CASE("straight strip is INCONCLUSIVE") {
  const auto geom = build_junction(fixtures::straight_strip());
  const auto sweep = r_sweep(geom, default_R_grid(), options());
  const auto kappa = estimate_kappa(sweep, &geom, options());
  CHECK(kappa.kappa == 0);
  CHECK(sweep.limits[0].ambiguous);
  CHECK_FALSE(absence_verdict(sweep, kappa.kappa).absent);
}

TEST_CASE("verdict picks the first grid point with margin beyond the error bar") {
  RSweepResult s;
  s.lambda = 10.0;
  for (double R : {0.0, 1.0, 2.0}) {
    MixedEigenvalues m;
    m.R = R;
    m.values = {5.0, 9.0 + R};
    m.error_bars = {0.1, 0.2};
    s.points.push_back(m);
  }
  const auto v = absence_verdict(s, 1);
  CHECK(v.absent);
  CHECK(v.R_star == 2.0);
  CHECK(v.margin == doctest::Approx(1.0));
  CHECK_FALSE(absence_verdict(s, 1, 10.0).absent);
  CHECK_FALSE(absence_verdict(s, 2).absent);
}

TEST_CASE("slope formula matches finite differences") {
  const auto geom = build_junction(fixtures::l_bend());
  const auto r = eigenvalue_slope(geom, 1.0, 1, options(2));
  REQUIRE(r.slopes.size() == 1);
  CHECK(r.slopes[0] > 0.0);
  CHECK(r.max_relative_mismatch < 0.1);
}

TEST_CASE("slope at the threshold is refused") {
  try {
    eigenvalue_slope(build_junction(fixtures::straight_strip()), 1.0, 1, options(2));
    FAIL("expected EIGENVALUE_AT_THRESHOLD");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EigenvalueAtThreshold);
  }
}

TEST_CASE("sufficient condition holds on the T-junction") {
  const auto r = no_trapped_sufficient(build_junction(fixtures::t_junction()), options(1));
  CHECK(r.holds);
  CHECK(r.mu1 > r.lambda);
  CHECK(r.constraints == 3);
}
