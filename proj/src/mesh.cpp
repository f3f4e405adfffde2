#include "wgt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "wgt/error.hpp"

namespace wgt {

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec2 a = vertices[static_cast<std::size_t>(tri[0])];
  const Vec2 b = vertices[static_cast<std::size_t>(tri[1])];
  const Vec2 c = vertices[static_cast<std::size_t>(tri[2])];
  return 0.5 * cross(b - a, c - a);
}

double Mesh::area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      m = std::max(m, norm(vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])] -
                           vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])]));
    }
  }
  return m;
}

namespace {

// Merges coincident points (up to tol) while preserving first-insertion order.
class VertexPool {
 public:
  explicit VertexPool(double tol) : tol_(tol) {}

  int add(Vec2 p) {
    const auto kx = static_cast<long long>(std::floor(p.x / tol_));
    const auto ky = static_cast<long long>(std::floor(p.y / tol_));
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({kx + dx, ky + dy});
        if (it == cells_.end()) continue;
        for (int id : it->second) {
          if (norm(points_[static_cast<std::size_t>(id)] - p) <= tol_) return id;
        }
      }
    }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    cells_[{kx, ky}].push_back(id);
    return id;
  }

  std::vector<Vec2> take() { return std::move(points_); }

 private:
  double tol_;
  std::vector<Vec2> points_;
  std::map<std::pair<long long, long long>, std::vector<int>> cells_;
};

bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
  return d1 >= -1e-14 && d2 >= -1e-14 && d3 >= -1e-14;
}

std::vector<std::array<std::size_t, 3>> ear_clip(const std::vector<Vec2>& poly) {
  std::vector<std::size_t> idx(poly.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::array<std::size_t, 3>> out;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t ip = idx[(k + idx.size() - 1) % idx.size()];
      const std::size_t ic = idx[k];
      const std::size_t in = idx[(k + 1) % idx.size()];
      const Vec2 a = poly[ip], b = poly[ic], c = poly[in];
      if (cross(b - a, c - b) <= 1e-14) continue;  // reflex or straight
      bool empty = true;
      for (std::size_t j : idx) {
        if (j == ip || j == ic || j == in) continue;
        if (point_in_triangle(poly[j], a, b, c)) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      out.push_back({ip, ic, in});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw Error(ErrorCode::DegenerateDomain, "ear clipping failed on node polygon");
  }
  out.push_back({idx[0], idx[1], idx[2]});
  return out;
}

void add_triangle(std::vector<std::array<int, 3>>& tris, const std::vector<Vec2>& pts, int a, int b, int c) {
  const double s = cross(pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)],
                         pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
  if (s > 0) tris.push_back({a, b, c});
  else tris.push_back({a, c, b});
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
  return norm(p - (a + t * d));
}

std::vector<BoundaryEdge> find_boundary(const std::vector<Vec2>& pts,
                                        const std::vector<std::array<int, 3>>& tris,
                                        const TruncatedDomain& domain, double tol) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<BoundaryEdge> edges;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
      if (count[{std::min(a, b), std::max(a, b)}] != 1) continue;
      const Vec2 mid = 0.5 * (pts[static_cast<std::size_t>(a)] + pts[static_cast<std::size_t>(b)]);
      BoundaryTag tag = BoundaryTag::dirichlet();
      bool found = false;
      for (const auto& seg : domain.boundary) {
        if (point_segment_distance(mid, seg.from, seg.to) <= tol) {
          tag = seg.tag;
          found = true;
          break;
        }
      }
      if (!found) throw Error(ErrorCode::DegenerateDomain, "mesh boundary edge off the domain boundary");
      edges.push_back({a, b, tag});
    }
  }
  return edges;
}

}  // namespace

Mesh generate_mesh(const TruncatedDomain& domain, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh size must be positive");
  if (!(domain.area() > 0.0)) throw Error(ErrorCode::DegenerateDomain, "truncated domain has no area");
  const auto& geom = domain.geometry;
  double longest = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < geom.node.size(); ++i) {
    longest = std::max(longest, norm(geom.node[(i + 1) % geom.node.size()] - geom.node[i]));
    scale = std::max({scale, std::abs(geom.node[i].x), std::abs(geom.node[i].y)});
  }
  scale += domain.R;
  const int m = std::max(1, static_cast<int>(std::ceil(longest / h - 1e-9)));
  const double tol = 1e-10 * scale;

  VertexPool pool(tol);
  std::vector<std::array<int, 3>> tris;
  std::vector<Vec2> staged;  // coordinates indexed by pool ids, for orientation checks
  auto add = [&](Vec2 p) {
    const int id = pool.add(p);
    if (static_cast<std::size_t>(id) >= staged.size()) staged.push_back(p);
    return id;
  };

  for (const auto& ear : ear_clip(geom.node)) {
    const Vec2 p0 = geom.node[ear[0]], p1 = geom.node[ear[1]], p2 = geom.node[ear[2]];
    std::vector<std::vector<int>> id(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; i + j <= m; ++j) {
        const double s = static_cast<double>(i) / m, t = static_cast<double>(j) / m;
        id[static_cast<std::size_t>(i)].push_back(add(p0 + s * (p1 - p0) + t * (p2 - p0)));
      }
    }
    auto at = [&](int i, int j) { return id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
    for (int i = 0; i < m; ++i) {
      for (int j = 0; i + j < m; ++j) {
        add_triangle(tris, staged, at(i, j), at(i + 1, j), at(i, j + 1));
        if (i + j + 1 < m) add_triangle(tris, staged, at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
      }
    }
  }

  if (domain.R > 0.0) {
    const int nz = std::max(1, static_cast<int>(std::ceil(domain.R / h - 1e-9)));
    for (const auto& o : geom.outlets) {
      std::vector<std::vector<int>> id(static_cast<std::size_t>(m + 1));
      for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= nz; ++j) {
          id[static_cast<std::size_t>(i)].push_back(
              add(o.point(o.width * i / m, domain.R * j / nz)));
        }
      }
      auto at = [&](int i, int j) { return id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < nz; ++j) {
          add_triangle(tris, staged, at(i, j), at(i + 1, j), at(i + 1, j + 1));
          add_triangle(tris, staged, at(i, j), at(i + 1, j + 1), at(i, j + 1));
        }
      }
    }
  }

  Mesh mesh;
  mesh.domain = domain;
  mesh.vertices = pool.take();
  mesh.triangles = std::move(tris);
  mesh.h = h;
  mesh.node_divisions = m;
  mesh.boundary_edges = find_boundary(mesh.vertices, mesh.triangles, domain, 1e-8 * scale);
  return mesh;
}

Mesh refine(const Mesh& mesh) {
  Mesh out;
  out.domain = mesh.domain;
  out.vertices = mesh.vertices;
  out.h = 0.5 * mesh.h;
  out.node_divisions = 2 * mesh.node_divisions;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                                  mesh.vertices[static_cast<std::size_t>(b)]));
    mid.emplace(key, id);
    return id;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int m01 = midpoint(t[0], t[1]), m12 = midpoint(t[1], t[2]), m20 = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], m01, m20});
    out.triangles.push_back({m01, t[1], m12});
    out.triangles.push_back({m20, m12, t[2]});
    out.triangles.push_back({m01, m12, m20});
  }
  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint(e.v0, e.v1);
    out.boundary_edges.push_back({e.v0, m, e.tag});
    out.boundary_edges.push_back({m, e.v1, e.tag});
  }
  return out;
}

void write_vtk(std::ostream& os, const Mesh& mesh, const std::vector<PointField>& fields) {
  os << "# vtk DataFile Version 3.0\n";
  os << "junction mesh R=" << mesh.domain.R << " h=" << mesh.h << "\n";
  os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os.precision(17);
  os << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << mesh.triangles.size() << ' ' << 4 * mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  os << "CELL_TYPES " << mesh.triangles.size() << "\n";
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) os << "5\n";
  if (fields.empty()) return;
  os << "POINT_DATA " << mesh.vertices.size() << "\n";
  for (const auto& f : fields) {
    if (f.values.size() != mesh.vertices.size()) {
      throw Error(ErrorCode::InvalidArgument, "point field '" + f.name + "' has wrong length");
    }
    os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.values) os << v << "\n";
  }
}

}  // namespace wgt
