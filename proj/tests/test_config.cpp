#include <doctest.h>

#include <sstream>

#include "wgt/config.hpp"
#include "wgt/error.hpp"

using namespace wgt;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("documents keep sections, arrays of tables and value kinds") {
  std::istringstream in(R"(# comment
[a]
x = 3/4   # trailing comment
s = "hi # not a comment"
b = true
list = [[1, "x"], [2.5, -1/3]]

[[item]]
k = 1
[[item]]
k = 2
)");
  const ConfigDocument d = parse_document(in);
  const ConfigTable& a = d.sections.at("a");
  CHECK(a.at("x").as_number("x") == doctest::Approx(0.75));
  REQUIRE(a.at("x").exact.has_value());
  CHECK(*a.at("x").exact == Rational::make(3, 4));
  CHECK(a.at("s").as_string("s") == "hi # not a comment");
  CHECK(a.at("b").as_bool("b"));
  const auto& list = a.at("list").as_array("list");
  REQUIRE(list.size() == 2);
  CHECK(list[0].items[1].as_string("") == "x");
  CHECK(*list[1].items[1].exact == Rational::make(-1, 3));
  REQUIRE(d.arrays.at("item").size() == 2);
  CHECK(d.arrays.at("item")[1].at("k").as_int("k") == 2);
}

TEST_CASE("decimals are read as exact rationals") {
  std::istringstream in("[a]\nx = 0.125\ny = 2\n");
  const ConfigDocument d = parse_document(in);
  CHECK(*d.sections.at("a").at("x").exact == Rational::make(1, 8));
  CHECK(*d.sections.at("a").at("y").exact == Rational::make(2, 1));
}

TEST_CASE("fixtures and options load with overrides") {
  const RunConfig c = parse(R"(
[geometry]
fixture = "t_junction"
[absence]
h = 1/20
levels = 3
k = 5
R = [0, 1/2, 2]
[scattering]
modes = 6
phase = 0.5
[run]
seed = 7
out = "somewhere"
)");
  CHECK(c.geometry.outlets.size() == 3);
  CHECK(c.sweep.h == doctest::Approx(0.05));
  CHECK(c.sweep.levels == 3);
  CHECK(c.sweep.k == 5);
  CHECK(c.R_grid == std::vector<double>{0.0, 0.5, 2.0});
  CHECK(c.scattering.modes == 6);
  CHECK(c.scattering.phase == 0.5);
  CHECK(c.seed == 7);
  CHECK(c.sweep.eigen.seed == 7);
  CHECK(c.out == "somewhere");
}

TEST_CASE("explicit vertices keep exact outlet widths") {
  const RunConfig c = parse(R"(
[geometry]
vertices = [[0, 0], [1, 0], [1, 1/2], [1/2, 1], [0, 1]]
[[outlet]]
edge = 4
[[outlet]]
edge = 1
label = 9
)");
  const auto g = build_junction(c.geometry);
  REQUIRE(g.outlet_count() == 2);
  CHECK(*g.outlets[1].exact_width == Rational::make(1, 2));
  CHECK(g.outlets[1].label == 9);
}

TEST_CASE("parameter grids from start, stop and count are exact at the ends") {
  const RunConfig c = parse(R"(
[geometry]
fixture = "straight_strip"
[param_sweep]
moves = [[1, "x", 1, 0]]
start = 0.3
stop = 0.9
count = 7
)");
  REQUIRE(c.param.grid.size() == 7);
  CHECK(c.param.grid.front() == 0.3);
  CHECK(c.param.grid.back() == 0.9);
  CHECK(c.param.grid[3] == 0.6);
  REQUIRE(c.param.moves.size() == 1);
  CHECK(c.param.moves[0].axis == 0);
}

TEST_CASE("knob moves vertices affinely") {
  JunctionSpec s = fixtures::straight_strip();
  const JunctionSpec moved = apply_knob(s, {{1, 0, 2.0, 0.5}, {2, 1, -1.0, 3.0}}, 0.25);
  CHECK(moved.vertices[1].x.value == doctest::Approx(1.0));
  CHECK(moved.vertices[2].y.value == doctest::Approx(2.75));
  CHECK(moved.vertices[0].x.value == s.vertices[0].x.value);
}

TEST_CASE("malformed input is CONFIG_PARSE") {
  CHECK(parse_error("[geometry]\nfixture = \"t_junction\"\nbogus = 1\n") == ErrorCode::ConfigParse);
  CHECK(parse_error("[nowhere]\nx = 1\n") == ErrorCode::ConfigParse);
  CHECK(parse_error("[geometry]\nfixture = \"pentagon\"\n") == ErrorCode::ConfigParse);
  CHECK(parse_error("[geometry]\nfixture = \"t_junction\"\n[absence]\nh = 1/0\n") == ErrorCode::ConfigParse);
  CHECK(parse_error("[geometry]\nfixture = \"t_junction\"\n[absence]\nh = [1, 2\n") == ErrorCode::ConfigParse);
  CHECK(parse_error("x = 1\n") == ErrorCode::ConfigParse);
  CHECK(parse_error("[absence]\nh = 0.1\n") == ErrorCode::ConfigParse);
}
