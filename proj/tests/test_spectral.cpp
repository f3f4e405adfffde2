#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgt/error.hpp"
#include "wgt/spectral.hpp"

using namespace wgt;

namespace {

constexpr double kPi = std::numbers::pi;

struct Pencil {
  SparseMatrix K, M;
};

Pencil dirichlet_square(double h) {
  const Mesh m = generate_mesh(truncate(build_junction(fixtures::unit_square({})), 0.0), h);
  const DofMap d = make_dofmap(m);
  return {assemble_stiffness(m, d), assemble_mass(m, d)};
}

}  // namespace

TEST_CASE("dense and iterative paths agree") {
  const Pencil p = dirichlet_square(1.0 / 32.0);
  REQUIRE(p.K.rows() > 500);
  EigenOptions dense;
  dense.dense_cutoff = 100000;
  const EigenResult a = smallest_eigenpairs(p.K, p.M, 4);
  const EigenResult b = smallest_eigenpairs(p.K, p.M, 4, dense);
  for (int j = 0; j < 4; ++j) {
    CHECK(a.values[j] == doctest::Approx(b.values[j]).epsilon(1e-8));
    CHECK(a.residuals[j] < 1e-6);
  }
}

TEST_CASE("Dirichlet square eigenvalues converge from above at second order") {
  const double exact[] = {2 * kPi * kPi, 5 * kPi * kPi, 5 * kPi * kPi, 8 * kPi * kPi};
  const EigenResult c = smallest_eigenpairs(dirichlet_square(1.0 / 16.0).K, dirichlet_square(1.0 / 16.0).M, 4);
  const Pencil f = dirichlet_square(1.0 / 32.0);
  const EigenResult r = smallest_eigenpairs(f.K, f.M, 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(r.values[j] >= exact[j]);
    CHECK(c.values[j] >= r.values[j]);
    const double ratio = (c.values[j] - exact[j]) / (r.values[j] - exact[j]);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("eigenvectors are M-orthonormal") {
  const Pencil p = dirichlet_square(1.0 / 24.0);
  const EigenResult r = smallest_eigenpairs(p.K, p.M, 5);
  const Eigen::MatrixXd G = r.vectors.transpose() * (p.M * r.vectors);
  CHECK((G - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-8);
}

TEST_CASE("fixed seed gives identical results") {
  const Pencil p = dirichlet_square(1.0 / 32.0);
  const EigenResult a = smallest_eigenpairs(p.K, p.M, 3);
  const EigenResult b = smallest_eigenpairs(p.K, p.M, 3);
  for (int j = 0; j < 3; ++j) CHECK(a.values[j] == b.values[j]);
}

TEST_CASE("constraints remove the constrained direction") {
  const Pencil p = dirichlet_square(1.0 / 16.0);
  const EigenResult free = smallest_eigenpairs(p.K, p.M, 3);
  // orthogonality to the first eigenvector lifts the spectrum by one slot
  const Eigen::MatrixXd C = (p.M * free.vectors.col(0)).transpose();
  const EigenResult con = constrained_eigenpairs(p.K, p.M, C, 2);
  CHECK(con.values[0] == doctest::Approx(free.values[1]).epsilon(1e-8));
  CHECK(std::abs((C * con.vectors.col(0))(0)) < 1e-8);
}

TEST_CASE("bad input is rejected") {
  const Pencil p = dirichlet_square(0.25);
  CHECK_THROWS_AS(smallest_eigenpairs(p.K, p.M, 0), Error);
  CHECK_THROWS_AS(smallest_eigenpairs(p.K, p.M, 1000), Error);
}
