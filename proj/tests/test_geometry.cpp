#include <doctest.h>

#include <algorithm>

#include "wgt/error.hpp"
#include "wgt/geometry.hpp"

using namespace wgt;

namespace {

ErrorCode code_of(const JunctionSpec& spec) {
  try {
    build_junction(spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

int count_faces(const TruncatedDomain& d) {
  return static_cast<int>(std::count_if(d.boundary.begin(), d.boundary.end(), [](const TaggedSegment& s) { return !s.tag.is_dirichlet(); }));
}

double dirichlet_length(const TruncatedDomain& d) {
  double len = 0.0;
  for (const auto& s : d.boundary)
    if (s.tag.is_dirichlet()) len += norm(s.to - s.from);
  return len;
}

}  // namespace

TEST_CASE("fixtures produce the expected outlet counts") {
  CHECK(build_junction(fixtures::straight_strip()).outlet_count() == 2);
  CHECK(build_junction(fixtures::t_junction()).outlet_count() == 3);
  CHECK(build_junction(fixtures::cross()).outlet_count() == 4);
  CHECK(build_junction(fixtures::l_bend()).outlet_count() == 2);
}

TEST_CASE("outlets point away from the node and have unit width") {
  const auto g = build_junction(fixtures::cross());
  for (const auto& o : g.outlets) {
    CHECK(o.width == doctest::Approx(1.0));
    REQUIRE(o.exact_width.has_value());
    CHECK(*o.exact_width == Rational::make(1, 1));
    const Vec2 mid = o.point(0.5 * o.width, 0.0);
    const Vec2 centre{0.5, 0.5};
    CHECK(dot(mid - centre, o.direction) > 0.0);
    CHECK(o.local_y(o.point(0.3, 2.0)) == doctest::Approx(0.3));
    CHECK(o.local_z(o.point(0.3, 2.0)) == doctest::Approx(2.0));
  }
}

TEST_CASE("clockwise input is reoriented with the outlet edges remapped") {
  JunctionSpec cw;
  cw.vertices = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}};
  cw.outlets = {{0, 1}};  // edge (0,0)-(0,1): the left side
  const auto g = build_junction(cw);
  CHECK(polygon_signed_area(g.node) > 0.0);
  REQUIRE(g.outlet_count() == 1);
  CHECK(g.outlets[0].direction.x == doctest::Approx(-1.0));
  CHECK(g.outlets[0].direction.y == doctest::Approx(0.0));
}

TEST_CASE("invalid junctions are rejected") {
  JunctionSpec bowtie;
  bowtie.vertices = {{0, 0}, {3, 0}, {3, 2}, {1, -1}};
  bowtie.outlets = {{0, 0}};
  CHECK(code_of(bowtie) == ErrorCode::SelfIntersectingPolygon);

  JunctionSpec off = fixtures::unit_square({3});
  off.outlets = {{7, 0}};
  CHECK(code_of(off) == ErrorCode::AttachmentNotOnBoundary);

  JunctionSpec twice = fixtures::unit_square({3});
  twice.outlets = {{3, 1}, {3, 2}};
  CHECK(code_of(twice) == ErrorCode::OutletOverlap);

  // U-shaped node: a strip leaving the inner wall of the notch runs into the far prong.
  JunctionSpec u;
  u.vertices = {{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  u.outlets = {{5, 0}};
  CHECK(code_of(u) == ErrorCode::OutletOverlap);

  // Two outward strips that cross each other.
  JunctionSpec cone;
  cone.vertices = {{0, 0}, {4, 0}, {4, 1}, {3, 1}, {2, 0.5}, {1, 1}, {0, 1}};
  cone.outlets = {{3, 0}, {4, 0}};
  CHECK(code_of(cone) == ErrorCode::OutletOverlap);

  JunctionSpec flat;
  flat.vertices = {{0, 0}, {1, 0}, {2, 0}};
  flat.outlets = {{0, 0}};
  CHECK(code_of(flat) == ErrorCode::DegenerateDomain);
}

TEST_CASE("truncation at R = 0 tags node sides") {
  const auto t = truncate(build_junction(fixtures::t_junction()), 0.0);
  CHECK(t.area() == doctest::Approx(1.0));
  CHECK(count_faces(t) == 3);
  CHECK(dirichlet_length(t) == doctest::Approx(1.0));

  const auto c = truncate(build_junction(fixtures::cross()), 0.0);
  CHECK(count_faces(c) == 4);
  CHECK(dirichlet_length(c) == doctest::Approx(0.0));
}

TEST_CASE("straight strip truncated at R = 2 is a 5 x 1 rectangle with faces at the short ends") {
  const auto d = truncate(build_junction(fixtures::straight_strip()), 2.0);
  CHECK(d.area() == doctest::Approx(5.0));
  CHECK(count_faces(d) == 2);
  for (const auto& s : d.boundary) {
    if (s.tag.is_dirichlet()) continue;
    CHECK(std::abs(s.from.x - s.to.x) < 1e-12);
    CHECK((std::abs(s.from.x + 2.0) < 1e-12 || std::abs(s.from.x - 3.0) < 1e-12));
    CHECK(norm(s.to - s.from) == doctest::Approx(1.0));
  }
}

TEST_CASE("truncated area grows by R times the total outlet width") {
  for (const auto& spec : {fixtures::t_junction(), fixtures::cross(), fixtures::l_bend(), fixtures::t_junction_stem(0.5)}) {
    const auto g = build_junction(spec);
    double widths = 0.0;
    for (const auto& o : g.outlets) widths += o.width;
    for (double R : {0.0, 0.5, 3.0}) CHECK(truncate(g, R).area() == doctest::Approx(g.node_area() + R * widths));
  }
  CHECK_THROWS_AS(truncate(build_junction(fixtures::t_junction()), -1.0), Error);
}

TEST_CASE("rationals are kept normalized") {
  const Rational a = Rational::make(2, -4);
  CHECK(a.num == -1);
  CHECK(a.den == 2);
  CHECK(abs(a) == Rational::make(1, 2));
  CHECK(Rational::make(1, 3) < Rational::make(1, 2));
  CHECK(Rational::make(3, 4) - Rational::make(1, 4) == Rational::make(1, 2));
  CHECK_THROWS_AS(Rational::make(1, 0), Error);
}

TEST_CASE("stem fixture carries an exact stem width when given one") {
  JunctionSpec s = fixtures::t_junction_stem(0.5);
  s.vertices[3].x = Coordinate(Rational::make(3, 4));
  s.vertices[4].x = Coordinate(Rational::make(1, 4));
  s.vertices[3].y = s.vertices[4].y = Coordinate(Rational::make(1, 1));
  const auto g = build_junction(s);
  REQUIRE(g.outlet_count() == 3);
  bool found = false;
  for (const auto& o : g.outlets)
    if (o.exact_width && *o.exact_width == Rational::make(1, 2)) found = true;
  CHECK(found);
}
