#include "wgt/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "wgt/error.hpp"

namespace wgt {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigParse, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool parse_int(const std::string& s, std::int64_t& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data() + (s.size() > 0 && s[0] == '+' ? 1 : 0), end, out);
  return ec == std::errc() && ptr == end;
}

/// Integer, terminating decimal, p/q, or any floating literal.
std::optional<ConfigValue> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  ConfigValue v;
  v.kind = ConfigValue::Kind::Number;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    std::int64_t p = 0, q = 0;
    if (!parse_int(trim(s.substr(0, slash)), p) || !parse_int(trim(s.substr(slash + 1)), q) || q == 0) return std::nullopt;
    v.exact = Rational::make(p, q);
    v.number = v.exact->value();
    return v;
  }
  std::int64_t whole = 0;
  if (parse_int(s, whole)) {
    v.exact = Rational::make(whole, 1);
    v.number = static_cast<double>(whole);
    return v;
  }
  const char* begin = s.data() + (s[0] == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v.number);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  const auto dot = s.find('.');
  if (dot != std::string::npos && s.find_first_of("eE") == std::string::npos && s.size() - dot - 1 <= 15) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::int64_t mantissa = 0;
    if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
    if (parse_int(digits, mantissa)) {
      std::int64_t den = 1;
      for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      v.exact = Rational::make(mantissa, den);
    }
  }
  return v;
}

class ValueParser {
 public:
  explicit ValueParser(const std::string& s) : s_(s) {}

  ConfigValue parse() {
    ConfigValue v = value();
    skip();
    if (pos_ != s_.size()) fail("trailing characters in value: " + s_);
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ConfigValue value() {
    skip();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return array();
    if (c == '"') return string();
    std::size_t end = pos_;
    while (end < s_.size() && s_[end] != ',' && s_[end] != ']') ++end;
    const std::string token = trim(s_.substr(pos_, end - pos_));
    pos_ = end;
    ConfigValue v;
    if (token == "true" || token == "false") {
      v.kind = ConfigValue::Kind::Bool;
      v.flag = token == "true";
      return v;
    }
    auto n = parse_number(token);
    if (!n) fail("not a number: " + token);
    return *n;
  }

  ConfigValue string() {
    ++pos_;
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  ConfigValue array() {
    ++pos_;
    ConfigValue v;
    v.kind = ConfigValue::Kind::Array;
    skip();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      skip();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

const char* kind_name(ConfigValue::Kind k) {
  switch (k) {
    case ConfigValue::Kind::Number: return "number";
    case ConfigValue::Kind::String: return "string";
    case ConfigValue::Kind::Bool: return "bool";
    case ConfigValue::Kind::Array: return "array";
  }
  return "?";
}

void expect(const ConfigValue& v, ConfigValue::Kind k, const std::string& key) {
  if (v.kind != k) fail(key + ": expected " + kind_name(k) + ", got " + kind_name(v.kind));
}

}  // namespace

double ConfigValue::as_number(const std::string& key) const { return as_coordinate(key).value; }

Coordinate ConfigValue::as_coordinate(const std::string& key) const {
  if (kind == Kind::String) {
    auto n = parse_number(text);
    if (!n) fail(key + ": not a number: " + text);
    return n->as_coordinate(key);
  }
  expect(*this, Kind::Number, key);
  return exact ? Coordinate(*exact) : Coordinate(number);
}

int ConfigValue::as_int(const std::string& key) const {
  const Coordinate c = as_coordinate(key);
  if (!c.exact || c.exact->den != 1) fail(key + ": expected an integer");
  return static_cast<int>(c.exact->num);
}

const std::string& ConfigValue::as_string(const std::string& key) const {
  expect(*this, Kind::String, key);
  return text;
}

bool ConfigValue::as_bool(const std::string& key) const {
  expect(*this, Kind::Bool, key);
  return flag;
}

const std::vector<ConfigValue>& ConfigValue::as_array(const std::string& key) const {
  expect(*this, Kind::Array, key);
  return items;
}

ConfigDocument parse_document(std::istream& in) {
  ConfigDocument doc;
  ConfigTable* table = &doc.sections[""];
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(strip_comment(line));
    if (text.empty()) continue;
    if (text.rfind("[[", 0) == 0) {
      if (text.size() < 4 || text.substr(text.size() - 2) != "]]") fail("line " + std::to_string(lineno) + ": bad table header");
      auto& list = doc.arrays[trim(text.substr(2, text.size() - 4))];
      list.emplace_back();
      table = &list.back();
      continue;
    }
    if (text.front() == '[') {
      if (text.back() != ']') fail("line " + std::to_string(lineno) + ": bad section header");
      table = &doc.sections[trim(text.substr(1, text.size() - 2))];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    while (bracket_balance(value) > 0 && std::getline(in, line)) {
      ++lineno;
      value += " " + trim(strip_comment(line));
    }
    if (key.empty()) fail("line " + std::to_string(lineno) + ": empty key");
    if (table->count(key)) fail("line " + std::to_string(lineno) + ": duplicate key " + key);
    (*table)[key] = ValueParser(value).parse();
  }
  return doc;
}

namespace {

class Reader {
 public:
  Reader(const ConfigTable& table, std::string section) : table_(table), section_(std::move(section)) {}

  const ConfigValue* get(const std::string& key) {
    used_.insert(key);
    auto it = table_.find(key);
    return it == table_.end() ? nullptr : &it->second;
  }
  std::string name(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (auto v = get(key)) out = v->as_number(name(key));
  }
  void integer(const std::string& key, int& out) {
    if (auto v = get(key)) out = v->as_int(name(key));
  }
  void numbers(const std::string& key, std::vector<double>& out) {
    if (auto v = get(key)) {
      out.clear();
      for (const auto& item : v->as_array(name(key))) out.push_back(item.as_number(name(key)));
    }
  }
  void finish() const {
    for (const auto& [key, value] : table_)
      if (!used_.count(key)) fail("unknown key " + name(key));
  }

 private:
  const ConfigTable& table_;
  std::string section_;
  std::set<std::string> used_;
};

JunctionSpec fixture_spec(const std::string& name, Reader& r) {
  if (name == "straight_strip") {
    double length = 1.0;
    r.number("node_length", length);
    return fixtures::straight_strip(length);
  }
  if (name == "t_junction") return fixtures::t_junction();
  if (name == "cross") return fixtures::cross();
  if (name == "l_bend") return fixtures::l_bend();
  if (name == "t_junction_stem") {
    double stem = 1.0;
    r.number("stem", stem);
    return fixtures::t_junction_stem(stem);
  }
  fail("unknown fixture " + name);
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) fail(key + " must be positive");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  const ConfigDocument doc = parse_document(in);
  static const std::set<std::string> known{"", "geometry", "absence", "scattering", "run", "param_sweep"};
  for (const auto& [name, table] : doc.sections)
    if (!known.count(name)) fail("unknown section [" + name + "]");
  for (const auto& [name, list] : doc.arrays)
    if (name != "outlet") fail("unknown table array [[" + name + "]]");
  if (!doc.sections.at("").empty()) fail("keys must appear inside a section");

  RunConfig cfg;
  cfg.R_grid = default_R_grid();
  auto section = [&](const std::string& name) -> const ConfigTable& {
    static const ConfigTable empty;
    auto it = doc.sections.find(name);
    return it == doc.sections.end() ? empty : it->second;
  };

  Reader geo(section("geometry"), "geometry");
  if (auto v = geo.get("name")) cfg.name = v->as_string("geometry.name");
  if (auto v = geo.get("fixture")) {
    cfg.geometry = fixture_spec(v->as_string("geometry.fixture"), geo);
  } else {
    geo.get("node_length");
    geo.get("stem");
  }
  if (auto v = geo.get("vertices")) {
    cfg.geometry.vertices.clear();
    for (const auto& p : v->as_array("geometry.vertices")) {
      const auto& xy = p.as_array("geometry.vertices");
      if (xy.size() != 2) fail("geometry.vertices: each vertex needs two coordinates");
      cfg.geometry.vertices.push_back({xy[0].as_coordinate("geometry.vertices"), xy[1].as_coordinate("geometry.vertices")});
    }
  }
  geo.finish();
  if (auto it = doc.arrays.find("outlet"); it != doc.arrays.end()) {
    cfg.geometry.outlets.clear();
    for (const auto& table : it->second) {
      Reader o(table, "outlet");
      OutletRequest req;
      if (!o.get("edge")) fail("outlet.edge is required");
      o.integer("edge", req.edge);
      o.integer("label", req.label);
      o.finish();
      cfg.geometry.outlets.push_back(req);
    }
  }
  if (cfg.geometry.vertices.empty()) fail("geometry needs a fixture or vertices");
  if (cfg.geometry.outlets.empty()) fail("geometry needs at least one outlet");

  Reader ab(section("absence"), "absence");
  ab.number("h", cfg.sweep.h);
  ab.integer("levels", cfg.sweep.levels);
  ab.integer("k", cfg.sweep.k);
  ab.numbers("R", cfg.R_grid);
  ab.number("fd_step", cfg.sweep.fd_step);
  ab.number("error_factor", cfg.error_factor);
  ab.number("eigen_tol", cfg.sweep.eigen.tol);
  ab.finish();

  Reader sc(section("scattering"), "scattering");
  sc.number("h", cfg.scattering.h);
  sc.integer("levels", cfg.scattering.levels);
  sc.integer("modes", cfg.scattering.modes);
  sc.number("tol_eig", cfg.scattering.tol_eig);
  sc.number("phase", cfg.scattering.phase);
  sc.number("near_singular_ratio", cfg.scattering.near_singular_ratio);
  sc.number("R_vis", cfg.R_vis);
  sc.finish();

  Reader run(section("run"), "run");
  if (auto v = run.get("seed")) {
    const int seed = v->as_int("run.seed");
    if (seed < 0) fail("run.seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = run.get("out")) cfg.out = v->as_string("run.out");
  run.finish();

  Reader ps(section("param_sweep"), "param_sweep");
  if (auto v = ps.get("moves")) {
    for (const auto& m : v->as_array("param_sweep.moves")) {
      const auto& f = m.as_array("param_sweep.moves");
      if (f.size() != 4) fail("param_sweep.moves: entries are [vertex, axis, coef, offset]");
      VertexMove mv;
      mv.vertex = f[0].as_int("param_sweep.moves");
      const std::string& axis = f[1].as_string("param_sweep.moves");
      if (axis != "x" && axis != "y") fail("param_sweep.moves: axis must be \"x\" or \"y\"");
      mv.axis = axis == "x" ? 0 : 1;
      mv.coef = f[2].as_number("param_sweep.moves");
      mv.offset = f[3].as_number("param_sweep.moves");
      cfg.param.moves.push_back(mv);
    }
  }
  ps.numbers("grid", cfg.param.grid);
  if (cfg.param.grid.empty()) {
    const ConfigValue* start = ps.get("start");
    const ConfigValue* stop = ps.get("stop");
    const ConfigValue* count = ps.get("count");
    if (start || stop || count) {
      if (!start || !stop || !count) fail("param_sweep needs start, stop and count together");
      const double a = start->as_number("param_sweep.start");
      const double b = stop->as_number("param_sweep.stop");
      const int n = count->as_int("param_sweep.count");
      if (n < 1) fail("param_sweep.count must be >= 1");
      for (int i = 0; i < n; ++i) cfg.param.grid.push_back(n == 1 ? a : (a * (n - 1 - i) + b * i) / (n - 1));
    }
  } else {
    ps.get("start");
    ps.get("stop");
    ps.get("count");
  }
  ps.integer("bisection_steps", cfg.param.bisection_steps);
  ps.finish();

  require_positive(cfg.sweep.h, "absence.h");
  require_positive(cfg.scattering.h, "scattering.h");
  require_positive(cfg.sweep.fd_step, "absence.fd_step");
  require_positive(cfg.error_factor, "absence.error_factor");
  require_positive(cfg.sweep.eigen.tol, "absence.eigen_tol");
  require_positive(cfg.scattering.near_singular_ratio, "scattering.near_singular_ratio");
  if (cfg.scattering.tol_eig < 0.0) fail("scattering.tol_eig must be positive, or 0 for the calibrated default");
  if (cfg.sweep.levels < 1 || cfg.scattering.levels < 1) fail("refinement levels must be >= 1");
  if (cfg.sweep.k < 1) fail("absence.k must be >= 1");
  if (cfg.scattering.modes < 1) fail("scattering.modes must be >= 1");
  if (cfg.R_grid.empty()) fail("absence.R must not be empty");
  for (double R : cfg.R_grid)
    if (R < 0.0) fail("absence.R entries must be non-negative");
  if (cfg.R_vis < 0.0) fail("scattering.R_vis must be non-negative");
  cfg.sweep.eigen.seed = cfg.seed;
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  return parse_config(in);
}

JunctionSpec apply_knob(const JunctionSpec& spec, const std::vector<VertexMove>& moves, double t) {
  JunctionSpec out = spec;
  for (const auto& m : moves) {
    if (m.vertex < 0 || m.vertex >= static_cast<int>(out.vertices.size()))
      throw Error(ErrorCode::InvalidArgument, "knob vertex out of range");
    Coordinate& c = m.axis == 0 ? out.vertices[static_cast<std::size_t>(m.vertex)].x : out.vertices[static_cast<std::size_t>(m.vertex)].y;
    c = Coordinate(m.offset + m.coef * t);
  }
  return out;
}

}  // namespace wgt
