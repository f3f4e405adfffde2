#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <vector>

#include "wgt/mesh.hpp"

namespace wgt {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Retained boundary dofs of one truncation face, ordered by the local
/// cross-section coordinate y_n.
struct FaceDofs {
  int outlet = -1;
  std::vector<int> vertices;  ///< all face vertices including endpoints, ascending y
  std::vector<double> y;
  std::vector<int> dofs;      ///< dof per vertex, -1 where eliminated
  double width = 0.0;
};

/// Vertex -> dof numbering after eliminating Dirichlet vertices.
struct DofMap {
  std::vector<int> dof_of_vertex;  ///< -1 for eliminated vertices
  std::vector<int> vertex_of_dof;
  std::vector<FaceDofs> faces;     ///< indexed by outlet; empty vertices if absent

  int size() const { return static_cast<int>(vertex_of_dof.size()); }
  const FaceDofs& face(int outlet) const;
};

/// Dirichlet on Gamma(R); truncation faces keep their dofs (natural Neumann)
/// unless `faces_dirichlet` is set, which yields the Dirichlet-truncated problem.
DofMap make_dofmap(const Mesh& mesh, bool faces_dirichlet = false);

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& dofs);
SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs);

enum class FaceForm { Mass, TangentialStiffness };

/// 1D P1 form on gamma_n(R), embedded in the global dof numbering.
SparseMatrix face_gram(const Mesh& mesh, const DofMap& dofs, int outlet, FaceForm form = FaceForm::Mass);

/// Nodal interpolant restricted to retained dofs.
Vector interpolate(const Mesh& mesh, const DofMap& dofs, const std::function<double(Vec2)>& f);

/// Relative symmetry defect ||A - A^T||_max / ||A||_max.
double symmetry_defect(const SparseMatrix& a);

void write_matrix_market(std::ostream& os, const SparseMatrix& a);

}  // namespace wgt
