#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wgt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// Exact rational p/q with q > 0, kept normalized.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t p, std::int64_t q);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator-(const Rational& a, const Rational& b);
Rational abs(const Rational& a);
bool operator<(const Rational& a, const Rational& b);

/// A coordinate as parsed from configuration: floating value plus the exact
/// rational when the input was written as an integer or p/q.
struct Coordinate {
  double value = 0.0;
  std::optional<Rational> exact;

  Coordinate() = default;
  Coordinate(double v) : value(v) {}
  Coordinate(Rational r) : value(r.value()), exact(r) {}
};

struct VertexSpec {
  Coordinate x;
  Coordinate y;
};

struct OutletRequest {
  int edge = -1;   ///< node polygon edge i runs from vertex i to vertex i+1
  int label = 0;   ///< user-facing outlet number; 0 means "position + 1"
};

/// Structured description accepted by build_junction.
struct JunctionSpec {
  std::vector<VertexSpec> vertices;
  std::vector<OutletRequest> outlets;
};

/// Semi-infinite rectangular outlet Q_n = segment x [0, inf) attached to a full
/// node edge. Local coordinates: y along the segment from `a`, z along `direction`.
struct OutletSpec {
  Vec2 a;
  Vec2 b;
  Vec2 tangent;
  Vec2 direction;
  double width = 0.0;
  std::optional<Rational> exact_width;
  int label = 0;
  int edge = -1;

  Vec2 point(double y, double z) const { return a + y * tangent + z * direction; }
  double local_y(Vec2 p) const { return dot(p - a, tangent); }
  double local_z(Vec2 p) const { return dot(p - a, direction); }
};

/// Node polygon (counter-clockwise) plus outlets. Immutable after build_junction.
struct JunctionGeometry {
  std::vector<Vec2> node;
  std::vector<OutletSpec> outlets;

  std::size_t outlet_count() const { return outlets.size(); }
  double node_area() const;
  bool is_attached(int edge) const;
};

struct BoundaryTag {
  /// -1 for the Dirichlet wall Gamma(R), otherwise the outlet index whose
  /// truncation face gamma_n(R) this is.
  int face = -1;

  static BoundaryTag dirichlet() { return {-1}; }
  static BoundaryTag outlet_face(int n) { return {n}; }
  bool is_dirichlet() const { return face < 0; }
  friend bool operator==(const BoundaryTag&, const BoundaryTag&) = default;
};

struct TaggedSegment {
  Vec2 from;
  Vec2 to;
  BoundaryTag tag;
};

/// Omega(R): the node plus every outlet cut at z_n = R.
struct TruncatedDomain {
  JunctionGeometry geometry;
  double R = 0.0;
  std::vector<TaggedSegment> boundary;  ///< closed CCW polygon, zero-length pieces dropped

  double area() const;
};

JunctionGeometry build_junction(const JunctionSpec& spec);
TruncatedDomain truncate(const JunctionGeometry& geom, double R);

double polygon_signed_area(const std::vector<Vec2>& poly);

namespace fixtures {

/// Unit-square node with outlets on the given subset of edges
/// (0 bottom, 1 right, 2 top, 3 left).
JunctionSpec unit_square(const std::vector<int>& outlet_edges);
JunctionSpec straight_strip(double node_length = 1.0);
JunctionSpec t_junction();
JunctionSpec cross();
JunctionSpec l_bend();
/// Rectangle [0,1]x[0,1] node, outlets left/right, stem of width `stem`
/// centered on the top edge.
JunctionSpec t_junction_stem(double stem);

}  // namespace fixtures

}  // namespace wgt
