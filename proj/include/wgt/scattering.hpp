#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "wgt/cross_section.hpp"
#include "wgt/fem.hpp"
#include "wgt/modal.hpp"
#include "wgt/waves.hpp"

namespace wgt {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using CSparseMatrix = Eigen::SparseMatrix<Complex>;

struct ScatteringOptions {
  int modes = 12;
  double h = 1.0 / 16.0;
  int levels = 2;               ///< 1 = no extrapolation
  double tol_eig = 0.0;         ///< 0 selects the calibrated default
  double phase = 0.0;           ///< rotation of the threshold wave basis
  double near_singular_ratio = 1e3;
};

/// Node problem on Omega(0): FEM matrices plus the modal boundary data.
struct NodeSystem {
  JunctionGeometry geometry;
  Mesh mesh;
  DofMap dofs;
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<CrossSectionSpectrum> spectra;
  ThresholdInfo info;
  ModalTraceMap modal;
  SparseMatrix trace;             ///< stacked modal trace, channels x ndofs
  Eigen::VectorXd symbol;         ///< |kappa| per channel (M)
  std::vector<int> threshold_channels;  ///< L0 basis, one per threshold outlet
  std::vector<int> other_channels;      ///< L-perp basis

  int channels() const { return static_cast<int>(symbol.size()); }
};

NodeSystem build_node_system(const JunctionGeometry& geom, const Mesh& mesh, int modes);

/// Omega(0) meshes: generated at h, then refined once per extra level.
std::vector<Mesh> node_meshes(const JunctionGeometry& geom, double h, int levels);

/// Factorization of K - lambda Mass - i T^T M T, shared by every column solve.
class ReducedSolver {
 public:
  explicit ReducedSolver(const NodeSystem& node);
  ~ReducedSolver();
  ReducedSolver(const ReducedSolver&) = delete;
  ReducedSolver& operator=(const ReducedSolver&) = delete;

  /// w(g): g holds modal boundary data per channel.
  CVector solve(const CVector& g) const;
  CVector solve_load(const CVector& load) const;

 private:
  struct Impl;
  const NodeSystem* node_;
  std::unique_ptr<Impl> impl_;
};

CVector solve_reduced(const NodeSystem& node, const CVector& g);

/// S psi = i psi - sqrt(2) i M^{1/2} T w(psi), with g = -sqrt(2) i M^{1/2} psi.
CMatrix assemble_S(const NodeSystem& node);
CMatrix assemble_S(const NodeSystem& node, const ReducedSolver& solver);

struct ThresholdBlocks {
  CMatrix S0;          ///< P0 S P0 on L0
  CMatrix S_perp;      ///< P-perp S P-perp
  CMatrix S_perp0;     ///< P-perp S P0
  CMatrix S_0perp;     ///< P0 S P-perp
  CMatrix s;           ///< -i S0, rotated by e^{2i phase}
  CMatrix s_reduced;   ///< -i (S00 + S0p (I - Spp)^{-1} Sp0), rotated
  CMatrix S_hat;       ///< (P-perp + c P0) S (P-perp + c P0), c = (1+i)/sqrt 2
  double s_symmetry = 0.0;
  double s_unitarity = 0.0;
  double s_reduced_symmetry = 0.0;
  double s_reduced_unitarity = 0.0;
};

ThresholdBlocks extract_s(const CMatrix& S, const NodeSystem& node, double phase = 0.0);

/// Eigenvalues close to a target, with the kernel basis.
struct KernelCount {
  int count = 0;
  int ambiguous = 0;          ///< eigenvalues between tol and 10 tol from the target
  std::vector<Complex> eigenvalues;
  std::vector<double> distances;
  CMatrix kernel;             ///< columns span the detected eigenspace
};

KernelCount count_near(const CMatrix& A, Complex target, double tol);

struct ScatteringReport {
  int modes = 0;
  int threshold_count = 0;
  double lambda = 0.0;
  double phase = 0.0;
  std::vector<double> level_h;
  std::vector<double> level_unitarity;
  std::vector<double> level_s_symmetry;
  CMatrix S;                   ///< extrapolated over levels
  CMatrix S_fine;
  double unitarity = 0.0;      ///< ||S*S - I|| of the finest raw S
  double discretization = 0.0; ///< change of s_reduced under extrapolation
  ThresholdBlocks blocks;
  double tol_eig = 0.0;
  KernelCount trapped;         ///< S_perp near 1
  KernelCount stabilizing;     ///< s_reduced near -1
  KernelCount stabilizing_projected;  ///< s = -i S0 near -1
  KernelCount bounded;         ///< S_hat near 1
  double kernel_propagation = 0.0;  ///< max ||P0 S psi|| over trapped psi
  bool consistent = true;
  bool tolerance_unresolvable = false;
  std::vector<std::string> warnings;
};

ScatteringReport detect(const JunctionGeometry& geom, const ScatteringOptions& opts);

/// Threshold scattering matrix from incoming-wave forcing of the physical
/// radiation problem. Throws NEAR_SINGULAR when the system is too close to
/// singular compared with the symmetrized one.
struct PhysicalScattering {
  CMatrix s;
  double condition_ratio = 0.0;
};

PhysicalScattering physical_s(const NodeSystem& node, double phase = 0.0, double near_singular_ratio = 1e3);

struct PhysicalSolution {
  CVector u;        ///< FEM coefficients on Omega(0)
  CVector outgoing; ///< c_n per threshold outlet
  double condition_ratio = 0.0;
};

/// Radiation problem with interior load `f` (dof vector) and incoming amplitudes.
PhysicalSolution solve_physical_reduced(const NodeSystem& node, const CVector& f, const CVector& incoming,
                                        double phase = 0.0, double near_singular_ratio = 1e3);

enum class FieldKind { Trapped, Stabilizing };

/// Complex field on Omega(R_vis): interior FEM part plus modal tails.
struct Field {
  FieldKind kind = FieldKind::Trapped;
  Mesh mesh;                        ///< Omega(R_vis)
  std::vector<Complex> values;      ///< per vertex of `mesh`, normalized
  CVector interior;                 ///< node dofs, before normalization
  Mesh node_mesh;
  std::vector<Complex> node_values; ///< per node-mesh vertex, zero on Gamma
  std::vector<OutletSpec> outlets;
  std::vector<OutletField> tails;   ///< per outlet, local (y, z)
  Complex factor{1.0, 0.0};         ///< unit L2(Omega(2)) norm, peak made real

  Complex evaluate(Vec2 x) const;
};

/// `psi` is a channel vector (TRAPPED) or threshold coefficients c (STABILIZING).
Field reconstruct_field(const NodeSystem& node, const CMatrix& S, const CVector& coefficients, FieldKind kind,
                        double R_vis);

void write_field_vtk(std::ostream& os, const Field& field);

}  // namespace wgt
