#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wgt/absence.hpp"
#include "wgt/geometry.hpp"
#include "wgt/scattering.hpp"

namespace wgt {

/// Parsed TOML-style value. Numbers keep an exact rational when written as an
/// integer, a terminating decimal, or p/q.
struct ConfigValue {
  enum class Kind { Number, String, Bool, Array };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::optional<Rational> exact;
  std::string text;
  bool flag = false;
  std::vector<ConfigValue> items;

  double as_number(const std::string& key) const;
  Coordinate as_coordinate(const std::string& key) const;
  int as_int(const std::string& key) const;
  const std::string& as_string(const std::string& key) const;
  bool as_bool(const std::string& key) const;
  const std::vector<ConfigValue>& as_array(const std::string& key) const;
};

using ConfigTable = std::map<std::string, ConfigValue>;

/// Sections by name; `[[name]]` blocks append to `arrays[name]`.
struct ConfigDocument {
  std::map<std::string, ConfigTable> sections;
  std::map<std::string, std::vector<ConfigTable>> arrays;
};

ConfigDocument parse_document(std::istream& in);

/// coordinate = offset + coef * t on one axis of one node vertex.
struct VertexMove {
  int vertex = 0;
  int axis = 0;  ///< 0 = x, 1 = y
  double coef = 1.0;
  double offset = 0.0;
};

struct ParamSweepConfig {
  std::vector<VertexMove> moves;
  std::vector<double> grid;
  int bisection_steps = 30;
};

struct RunConfig {
  std::string name = "junction";
  JunctionSpec geometry;
  SweepOptions sweep;
  std::vector<double> R_grid;
  double error_factor = 1.0;
  ScatteringOptions scattering;
  double R_vis = 3.0;
  std::uint64_t seed = 20240601;
  std::string out = "out";
  ParamSweepConfig param;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Geometry with the knob set to t.
JunctionSpec apply_knob(const JunctionSpec& spec, const std::vector<VertexMove>& moves, double t);

}  // namespace wgt
