#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "wgt/geometry.hpp"

namespace wgt {

struct BoundaryEdge {
  int v0 = 0;
  int v1 = 0;
  BoundaryTag tag;
};

/// Conforming P1 triangulation of a truncated domain.
struct Mesh {
  TruncatedDomain domain;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;          ///< nominal target edge length
  int node_divisions = 1;  ///< subdivisions per node edge (and per outlet width)

  double area() const;
  double max_edge_length() const;
  double triangle_area(std::size_t t) const;
};

Mesh generate_mesh(const TruncatedDomain& domain, double h);

/// Red refinement: every triangle is split into four congruent children.
Mesh refine(const Mesh& mesh);

struct PointField {
  std::string name;
  std::vector<double> values;
};

/// Legacy VTK unstructured grid (ASCII), with optional scalar point data.
void write_vtk(std::ostream& os, const Mesh& mesh, const std::vector<PointField>& fields = {});

}  // namespace wgt
