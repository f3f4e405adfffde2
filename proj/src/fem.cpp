#include "wgt/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "wgt/error.hpp"

namespace wgt {

using Triplet = Eigen::Triplet<double>;

const FaceDofs& DofMap::face(int outlet) const {
  if (outlet < 0 || outlet >= static_cast<int>(faces.size()) || faces[static_cast<std::size_t>(outlet)].vertices.empty()) {
    throw Error(ErrorCode::EmptyFace, "no truncation face for outlet index " + std::to_string(outlet));
  }
  return faces[static_cast<std::size_t>(outlet)];
}

DofMap make_dofmap(const Mesh& mesh, bool faces_dirichlet) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<char> fixed(nv, 0);
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag.is_dirichlet() || faces_dirichlet) {
      fixed[static_cast<std::size_t>(e.v0)] = 1;
      fixed[static_cast<std::size_t>(e.v1)] = 1;
    }
  }
  DofMap map;
  map.dof_of_vertex.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    if (fixed[v]) continue;
    map.dof_of_vertex[v] = static_cast<int>(map.vertex_of_dof.size());
    map.vertex_of_dof.push_back(static_cast<int>(v));
  }

  const auto& outlets = mesh.domain.geometry.outlets;
  map.faces.resize(outlets.size());
  for (std::size_t n = 0; n < outlets.size(); ++n) {
    std::vector<int> verts;
    for (const auto& e : mesh.boundary_edges) {
      if (e.tag.face != static_cast<int>(n)) continue;
      verts.push_back(e.v0);
      verts.push_back(e.v1);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto& f = map.faces[n];
    f.outlet = static_cast<int>(n);
    f.width = outlets[n].width;
    std::vector<std::pair<double, int>> order;
    for (int v : verts) order.emplace_back(outlets[n].local_y(mesh.vertices[static_cast<std::size_t>(v)]), v);
    std::sort(order.begin(), order.end());
    for (const auto& [y, v] : order) {
      f.vertices.push_back(v);
      f.y.push_back(y);
      f.dofs.push_back(map.dof_of_vertex[static_cast<std::size_t>(v)]);
    }
  }
  return map;
}

namespace {

template <class ElementFn>
SparseMatrix assemble(const Mesh& mesh, const DofMap& dofs, ElementFn&& element) {
  std::vector<Triplet> trips;
  trips.reserve(9 * mesh.triangles.size());
  double local[3][3];
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    element(t, local);
    for (int i = 0; i < 3; ++i) {
      const int di = dofs.dof_of_vertex[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dofs.dof_of_vertex[static_cast<std::size_t>(tri[static_cast<std::size_t>(j)])];
        if (dj < 0) continue;
        trips.emplace_back(di, dj, local[i][j]);
      }
    }
  }
  SparseMatrix a(dofs.size(), dofs.size());
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& dofs) {
  return assemble(mesh, dofs, [&](std::size_t t, double (&k)[3][3]) {
    const auto& tri = mesh.triangles[t];
    Vec2 p[3];
    for (int i = 0; i < 3; ++i) p[i] = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])];
    const double area = mesh.triangle_area(t);
    // gradient of barycentric i is rot90(edge opposite i) / (2 area)
    Vec2 g[3];
    for (int i = 0; i < 3; ++i) {
      const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
      g[i] = {-e.y / (2 * area), e.x / (2 * area)};
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k[i][j] = area * dot(g[i], g[j]);
  });
}

SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs) {
  return assemble(mesh, dofs, [&](std::size_t t, double (&m)[3][3]) {
    const double area = mesh.triangle_area(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = area * (i == j ? 2.0 : 1.0) / 12.0;
  });
}

SparseMatrix face_gram(const Mesh& mesh, const DofMap& dofs, int outlet, FaceForm form) {
  const FaceDofs& f = dofs.face(outlet);
  if (f.vertices.size() < 2) throw Error(ErrorCode::EmptyFace, "face has fewer than two vertices");
  std::vector<Triplet> trips;
  for (std::size_t e = 0; e + 1 < f.vertices.size(); ++e) {
    const double len = f.y[e + 1] - f.y[e];
    double local[2][2];
    if (form == FaceForm::Mass) {
      local[0][0] = local[1][1] = len / 3.0;
      local[0][1] = local[1][0] = len / 6.0;
    } else {
      local[0][0] = local[1][1] = 1.0 / len;
      local[0][1] = local[1][0] = -1.0 / len;
    }
    const int d[2] = {f.dofs[e], f.dofs[e + 1]};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (d[i] >= 0 && d[j] >= 0) trips.emplace_back(d[i], d[j], local[i][j]);
  }
  SparseMatrix g(dofs.size(), dofs.size());
  g.setFromTriplets(trips.begin(), trips.end());
  g.makeCompressed();
  return g;
}

Vector interpolate(const Mesh& mesh, const DofMap& dofs, const std::function<double(Vec2)>& f) {
  Vector v(dofs.size());
  for (int d = 0; d < dofs.size(); ++d) {
    v[d] = f(mesh.vertices[static_cast<std::size_t>(dofs.vertex_of_dof[static_cast<std::size_t>(d)])]);
  }
  return v;
}

double symmetry_defect(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  double dmax = 0.0, amax = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  return amax > 0 ? dmax / amax : 0.0;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << "\n";
  os.precision(17);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << "\n";
}

}  // namespace wgt
