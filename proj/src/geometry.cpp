#include "wgt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wgt/error.hpp"

namespace wgt {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Rational Rational::make(std::int64_t p, std::int64_t q) {
  if (q == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  return {p / (g == 0 ? 1 : g), q / (g == 0 ? 1 : g)};
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::make(a.num * b.den - b.num * a.den, a.den * b.den);
}

Rational abs(const Rational& a) { return {a.num < 0 ? -a.num : a.num, a.den}; }

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    s += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * s;
}

double JunctionGeometry::node_area() const { return polygon_signed_area(node); }

bool JunctionGeometry::is_attached(int edge) const {
  return std::any_of(outlets.begin(), outlets.end(),
                     [edge](const OutletSpec& o) { return o.edge == edge; });
}

double TruncatedDomain::area() const {
  std::vector<Vec2> poly;
  poly.reserve(boundary.size());
  for (const auto& s : boundary) poly.push_back(s.from);
  return polygon_signed_area(poly);
}

namespace {

int orient(Vec2 a, Vec2 b, Vec2 c, double tol) {
  const double v = cross(b - a, c - a);
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p, double tol) {
  return std::min(a.x, b.x) - tol <= p.x && p.x <= std::max(a.x, b.x) + tol &&
         std::min(a.y, b.y) - tol <= p.y && p.y <= std::max(a.y, b.y) + tol;
}

bool segments_touch(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2, double tol) {
  const int o1 = orient(p1, p2, q1, tol), o2 = orient(p1, p2, q2, tol);
  const int o3 = orient(q1, q2, p1, tol), o4 = orient(q1, q2, p2, tol);
  if (o1 == 0 && on_segment(p1, p2, q1, tol)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2, tol)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1, tol)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2, tol)) return true;
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool is_simple(const std::vector<Vec2>& poly, double tol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    if (norm(b - a) <= tol) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 c = poly[j], d = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto each other.
        const Vec2 shared = (j == i + 1) ? b : a;
        const Vec2 u = (j == i + 1) ? a : b;
        const Vec2 v = (j == i + 1) ? d : c;
        if (orient(shared, u, v, tol) == 0 && dot(u - shared, v - shared) > 0) return false;
        continue;
      }
      if (segments_touch(a, b, c, d, tol)) return false;
    }
  }
  return true;
}

std::vector<Vec2> rectangle(const OutletSpec& o, double length) {
  return {o.a, o.a + length * o.direction, o.b + length * o.direction, o.b};
}

// Separating-axis test for convex polygons; true only for overlap of positive area.
bool convex_overlap(const std::vector<Vec2>& p, const std::vector<Vec2>& q, double tol) {
  auto separated_on = [&](const std::vector<Vec2>& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
      const Vec2 axis{-e.y / norm(e), e.x / norm(e)};
      double pmin = 1e300, pmax = -1e300, qmin = 1e300, qmax = -1e300;
      for (auto v : p) {
        pmin = std::min(pmin, dot(axis, v));
        pmax = std::max(pmax, dot(axis, v));
      }
      for (auto v : q) {
        qmin = std::min(qmin, dot(axis, v));
        qmax = std::max(qmax, dot(axis, v));
      }
      if (pmax <= qmin + tol || qmax <= pmin + tol) return true;
    }
    return false;
  };
  return !separated_on(p) && !separated_on(q);
}

// Does the open segment [a,b] pass through the interior of the convex CCW polygon?
bool segment_enters_convex(Vec2 a, Vec2 b, const std::vector<Vec2>& poly, double tol) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
    const Vec2 inward{-e.y / norm(e), e.x / norm(e)};
    const double num = dot(a - poly[i], inward) - tol;
    const double den = dot(d, inward);
    if (std::abs(den) < 1e-300) {
      if (num < 0) return false;
      continue;
    }
    const double t = -num / den;
    if (den > 0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
    if (t0 >= t1) return false;
  }
  return t1 - t0 > 1e-12;
}

}  // namespace

JunctionGeometry build_junction(const JunctionSpec& spec) {
  if (spec.vertices.size() < 3) {
    throw Error(ErrorCode::DegenerateDomain, "node polygon needs at least three vertices");
  }
  std::vector<Vec2> poly;
  for (const auto& v : spec.vertices) poly.push_back({v.x.value, v.y.value});
  double scale = 0.0;
  for (auto p : poly) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double tol = 1e-12 * std::max(scale, 1.0);

  const double area = polygon_signed_area(poly);
  if (std::abs(area) <= tol * tol) {
    throw Error(ErrorCode::DegenerateDomain, "node polygon has zero area");
  }
  if (!is_simple(poly, tol)) {
    throw Error(ErrorCode::SelfIntersectingPolygon, "node polygon is not simple");
  }
  const std::size_t nv = poly.size();
  // Edge i of the input ordering; remember it across a possible reversal.
  std::vector<int> edge_map(nv);
  std::iota(edge_map.begin(), edge_map.end(), 0);
  std::vector<VertexSpec> exact = spec.vertices;
  if (area < 0) {
    std::reverse(poly.begin(), poly.end());
    std::reverse(exact.begin(), exact.end());
    // input edge i (v_i -> v_{i+1}) becomes reversed edge nv-2-i (mod nv)
    for (std::size_t i = 0; i < nv; ++i) {
      edge_map[i] = static_cast<int>((2 * nv - 2 - i) % nv);
    }
  }

  JunctionGeometry geom;
  geom.node = poly;
  std::set<int> used;
  for (std::size_t k = 0; k < spec.outlets.size(); ++k) {
    const auto& req = spec.outlets[k];
    if (req.edge < 0 || req.edge >= static_cast<int>(nv)) {
      throw Error(ErrorCode::AttachmentNotOnBoundary,
                  "outlet " + std::to_string(k + 1) + " references a missing polygon edge");
    }
    const int e = edge_map[static_cast<std::size_t>(req.edge)];
    if (!used.insert(e).second) {
      throw Error(ErrorCode::OutletOverlap, "two outlets attach to the same edge");
    }
    OutletSpec o;
    o.edge = e;
    o.a = poly[static_cast<std::size_t>(e)];
    o.b = poly[(static_cast<std::size_t>(e) + 1) % nv];
    o.width = norm(o.b - o.a);
    if (!(o.width > tol)) {
      throw Error(ErrorCode::AttachmentNotOnBoundary, "outlet edge has zero length");
    }
    o.tangent = (1.0 / o.width) * (o.b - o.a);
    o.direction = {o.tangent.y, -o.tangent.x};  // outward for a CCW polygon
    const auto& va = exact[static_cast<std::size_t>(e)];
    const auto& vb = exact[(static_cast<std::size_t>(e) + 1) % nv];
    if (va.x.exact && va.y.exact && vb.x.exact && vb.y.exact) {
      if (*va.x.exact == *vb.x.exact) o.exact_width = abs(*vb.y.exact - *va.y.exact);
      else if (*va.y.exact == *vb.y.exact) o.exact_width = abs(*vb.x.exact - *va.x.exact);
    }
    o.label = req.label > 0 ? req.label : static_cast<int>(k + 1);
    geom.outlets.push_back(o);
  }

  // Strips are semi-infinite; a long truncation captures every crossing.
  const double far = 1e3 * (scale + 1.0);
  for (std::size_t i = 0; i < geom.outlets.size(); ++i) {
    const auto ri = rectangle(geom.outlets[i], far);
    for (std::size_t j = i + 1; j < geom.outlets.size(); ++j) {
      if (convex_overlap(ri, rectangle(geom.outlets[j], far), 1e-9 * (scale + 1.0))) {
        throw Error(ErrorCode::OutletOverlap, "outlet strips " + std::to_string(i + 1) +
                                                  " and " + std::to_string(j + 1) + " intersect");
      }
    }
    for (std::size_t e = 0; e < nv; ++e) {
      if (static_cast<int>(e) == geom.outlets[i].edge) continue;
      if (segment_enters_convex(poly[e], poly[(e + 1) % nv], ri, 1e-9 * (scale + 1.0))) {
        throw Error(ErrorCode::OutletOverlap,
                    "outlet strip " + std::to_string(i + 1) + " overlaps the node");
      }
    }
  }
  return geom;
}

TruncatedDomain truncate(const JunctionGeometry& geom, double R) {
  if (!(R >= 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation length must be >= 0");
  TruncatedDomain dom;
  dom.geometry = geom;
  dom.R = R;
  const std::size_t nv = geom.node.size();
  for (std::size_t e = 0; e < nv; ++e) {
    const Vec2 a = geom.node[e], b = geom.node[(e + 1) % nv];
    int outlet = -1;
    for (std::size_t n = 0; n < geom.outlets.size(); ++n) {
      if (geom.outlets[n].edge == static_cast<int>(e)) outlet = static_cast<int>(n);
    }
    if (outlet < 0) {
      dom.boundary.push_back({a, b, BoundaryTag::dirichlet()});
      continue;
    }
    const auto& o = geom.outlets[static_cast<std::size_t>(outlet)];
    if (R > 0.0) {
      dom.boundary.push_back({a, o.point(0.0, R), BoundaryTag::dirichlet()});
      dom.boundary.push_back({o.point(0.0, R), o.point(o.width, R), BoundaryTag::outlet_face(outlet)});
      dom.boundary.push_back({o.point(o.width, R), b, BoundaryTag::dirichlet()});
    } else {
      dom.boundary.push_back({a, b, BoundaryTag::outlet_face(outlet)});
    }
  }
  return dom;
}

namespace fixtures {

JunctionSpec unit_square(const std::vector<int>& outlet_edges) {
  JunctionSpec s;
  const Rational zero = Rational::make(0, 1), one = Rational::make(1, 1);
  s.vertices = {{zero, zero}, {one, zero}, {one, one}, {zero, one}};
  int label = 1;
  for (int e : outlet_edges) s.outlets.push_back({e, label++});
  return s;
}

JunctionSpec straight_strip(double node_length) {
  JunctionSpec s = unit_square({3, 1});
  if (node_length != 1.0) {
    s.vertices[1].x = Coordinate(node_length);
    s.vertices[2].x = Coordinate(node_length);
  }
  return s;
}

JunctionSpec t_junction() { return unit_square({3, 1, 2}); }

JunctionSpec cross() { return unit_square({3, 1, 2, 0}); }

JunctionSpec l_bend() { return unit_square({3, 2}); }

JunctionSpec t_junction_stem(double stem) {
  JunctionSpec s;
  const double lo = 0.5 - 0.5 * stem, hi = 0.5 + 0.5 * stem;
  s.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {hi, 1.0}, {lo, 1.0}, {0.0, 1.0}};
  // exact integers on the unit-width edges keep the left/right widths rational
  for (int i : {0, 1, 2, 5}) {
    s.vertices[static_cast<std::size_t>(i)].x = Coordinate(Rational::make(static_cast<std::int64_t>(s.vertices[static_cast<std::size_t>(i)].x.value), 1));
    s.vertices[static_cast<std::size_t>(i)].y = Coordinate(Rational::make(static_cast<std::int64_t>(s.vertices[static_cast<std::size_t>(i)].y.value), 1));
  }
  s.outlets = {{5, 1}, {1, 2}, {3, 3}};
  return s;
}

}  // namespace fixtures

}  // namespace wgt
