#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wgt/fem.hpp"

using namespace wgt;

namespace {

constexpr double kPi = std::numbers::pi;

Mesh strip_mesh(double R, double h) { return generate_mesh(truncate(build_junction(fixtures::straight_strip()), R), h); }

}  // namespace

TEST_CASE("stiffness and mass are symmetric and consistent") {
  const Mesh m = strip_mesh(1.0, 0.25);
  const DofMap dofs = make_dofmap(m);
  const SparseMatrix K = assemble_stiffness(m, dofs), M = assemble_mass(m, dofs);
  CHECK(symmetry_defect(K) < 1e-14);
  CHECK(symmetry_defect(M) < 1e-14);

  // Mass reproduces area for the constant; only meaningful with all dofs kept.
  const Mesh sq = generate_mesh(truncate(build_junction(fixtures::cross()), 0.0), 0.25);
  const DofMap all = make_dofmap(sq);
  REQUIRE(all.size() == static_cast<int>(sq.vertices.size()));
  const Vector one = Vector::Ones(all.size());
  CHECK(one.dot(assemble_mass(sq, all) * one) == doctest::Approx(1.0));
  CHECK((assemble_stiffness(sq, all) * one).norm() < 1e-12);
}

TEST_CASE("Dirichlet walls remove wall vertices but keep face interiors") {
  const Mesh m = strip_mesh(0.0, 0.25);
  const DofMap dofs = make_dofmap(m);
  // 5 x 5 grid with top and bottom rows removed
  CHECK(dofs.size() == 15);
  for (int n = 0; n < 2; ++n) {
    const FaceDofs& f = dofs.face(n);
    CHECK(f.vertices.size() == 5);
    CHECK(f.dofs.front() == -1);
    CHECK(f.dofs.back() == -1);
    CHECK(f.width == doctest::Approx(1.0));
  }
  CHECK(make_dofmap(m, true).size() == 3 * 3);
}

TEST_CASE("energy of an interpolant converges to the exact Dirichlet integral") {
  // u = sin(pi y) cos(pi x / 5) on [-2, 3] x [0, 1]
  auto u = [](Vec2 p) { return std::sin(kPi * p.y) * std::cos(kPi * (p.x + 2.0) / 5.0); };
  const double exact = 0.25 * 5.0 * (kPi * kPi + kPi * kPi / 25.0);
  double prev = 0.0;
  for (double h : {0.25, 0.125, 0.0625}) {
    const Mesh m = strip_mesh(2.0, h);
    const DofMap dofs = make_dofmap(m);
    const Vector v = interpolate(m, dofs, u);
    const double err = std::abs(v.dot(assemble_stiffness(m, dofs) * v) - exact);
    if (prev > 0.0) CHECK(err < 0.3 * prev);
    prev = err;
  }
  CHECK(prev < 5e-3 * exact);
}

TEST_CASE("face Gram matrices integrate along the face") {
  const Mesh m = strip_mesh(0.5, 0.125);
  const DofMap dofs = make_dofmap(m);
  auto f = [](Vec2 p) { return std::sin(kPi * p.y); };
  const Vector v = interpolate(m, dofs, f);
  for (int n = 0; n < 2; ++n) {
    const double mass = v.dot(face_gram(m, dofs, n, FaceForm::Mass) * v);
    const double stiff = v.dot(face_gram(m, dofs, n, FaceForm::TangentialStiffness) * v);
    CHECK(mass == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(stiff == doctest::Approx(0.5 * kPi * kPi).epsilon(2e-2));
  }
}
