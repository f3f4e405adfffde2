#include "wgt/scattering.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "wgt/error.hpp"

namespace wgt {

namespace {

constexpr Complex I{0.0, 1.0};
const double kSqrt2 = std::numbers::sqrt2;

CSparseMatrix to_complex(const SparseMatrix& a) { return a.cast<Complex>(); }

double identity_defect(const CMatrix& S) {
  const auto n = S.cols();
  return (S.adjoint() * S - CMatrix::Identity(n, n)).norm();
}

using LU = Eigen::SparseLU<CSparseMatrix, Eigen::COLAMDOrdering<int>>;

void factor(LU& lu, const CSparseMatrix& A) {
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "reduced node system could not be factored");
}

/// K - lambda Mass - i T^T M T.
CSparseMatrix symmetrized_matrix(const NodeSystem& node) {
  const SparseMatrix B = node.trace.transpose() * node.symbol.asDiagonal() * node.trace;
  CSparseMatrix A = to_complex(SparseMatrix(node.stiffness - node.info.lambda * node.mass));
  A -= I * to_complex(B);
  return A;
}

/// K - lambda Mass + sum kappa t t^T, with kappa_1 = -i on threshold channels.
CSparseMatrix physical_matrix(const NodeSystem& node) {
  const CSparseMatrix T = to_complex(node.trace);
  CVector kappa(node.channels());
  for (int n = 0; n < node.modal.outlets(); ++n)
    for (int p = 1; p <= node.modal.modes; ++p)
      kappa(node.modal.channel(n, p)) = node.info.kappa[static_cast<std::size_t>(n)][static_cast<std::size_t>(p - 1)];
  CSparseMatrix A = to_complex(SparseMatrix(node.stiffness - node.info.lambda * node.mass));
  A += CSparseMatrix(T.transpose() * kappa.asDiagonal() * T);
  return A;
}

/// Power iteration on A^{-H} A^{-1}; A is complex symmetric so A^{-H} x = conj(A^{-1} conj x).
double inverse_norm(const LU& lu, int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  CVector x(n);
  for (int i = 0; i < n; ++i) x(i) = Complex(dist(rng), dist(rng));
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 40; ++it) {
    const CVector y = lu.solve(x);
    const CVector z = lu.solve(y.conjugate()).conjugate();
    const double next = std::sqrt(z.norm());
    x = z / z.norm();
    if (it > 3 && std::abs(next - sigma) <= 1e-6 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

CMatrix block(const CMatrix& S, const std::vector<int>& rows, const std::vector<int>& cols) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = S(rows[i], cols[j]);
  return out;
}

}  // namespace

std::vector<Mesh> node_meshes(const JunctionGeometry& geom, double h, int levels) {
  if (levels < 1) throw Error(ErrorCode::InvalidArgument, "refinement levels must be >= 1");
  std::vector<Mesh> out;
  out.push_back(generate_mesh(truncate(geom, 0.0), h));
  for (int l = 1; l < levels; ++l) out.push_back(refine(out.back()));
  return out;
}

NodeSystem build_node_system(const JunctionGeometry& geom, const Mesh& mesh, int modes) {
  if (modes < 1) throw Error(ErrorCode::InvalidArgument, "at least one mode per outlet is required");
  NodeSystem node;
  node.geometry = geom;
  node.mesh = mesh;
  node.dofs = make_dofmap(node.mesh);
  node.stiffness = assemble_stiffness(node.mesh, node.dofs);
  node.mass = assemble_mass(node.mesh, node.dofs);
  node.spectra = outlet_spectra(geom, modes);
  node.info = threshold(node.spectra);
  node.modal = build_modal_maps(node.mesh, node.dofs, node.spectra, modes);
  node.trace = node.modal.stacked();
  node.symbol.resize(node.modal.channels());
  for (int n = 0; n < node.modal.outlets(); ++n) {
    for (int p = 1; p <= modes; ++p) {
      const int c = node.modal.channel(n, p);
      node.symbol(c) = node.info.kappa_modulus(n, p);
      if (p == 1 && node.info.is_threshold[static_cast<std::size_t>(n)]) {
        if (node.symbol(c) != 1.0) throw Error(ErrorCode::InvalidArgument, "|kappa_1| must be exactly 1 on threshold outlets");
        node.threshold_channels.push_back(c);
      } else {
        node.other_channels.push_back(c);
      }
    }
  }
  return node;
}

struct ReducedSolver::Impl {
  LU lu;
};

ReducedSolver::ReducedSolver(const NodeSystem& node) : node_(&node), impl_(std::make_unique<Impl>()) {
  factor(impl_->lu, symmetrized_matrix(node));
}

ReducedSolver::~ReducedSolver() = default;

CVector ReducedSolver::solve_load(const CVector& load) const {
  CVector w = impl_->lu.solve(load);
  if (!w.allFinite()) throw Error(ErrorCode::SingularSystem, "non-finite reduced solution");
  return w;
}

CVector ReducedSolver::solve(const CVector& g) const {
  if (g.size() != node_->channels()) throw Error(ErrorCode::InvalidArgument, "modal data has the wrong length");
  return solve_load(to_complex(node_->trace).transpose() * g);
}

CVector solve_reduced(const NodeSystem& node, const CVector& g) { return ReducedSolver(node).solve(g); }

CMatrix assemble_S(const NodeSystem& node) { return assemble_S(node, ReducedSolver(node)); }

CMatrix assemble_S(const NodeSystem& node, const ReducedSolver& solver) {
  const int m = node.channels();
  const CSparseMatrix T = to_complex(node.trace);
  const Eigen::VectorXd root = node.symbol.cwiseSqrt();
  CMatrix S = I * CMatrix::Identity(m, m);
  for (int j = 0; j < m; ++j) {
    CVector g = CVector::Zero(m);
    g(j) = -kSqrt2 * I * root(j);
    const CVector trace = T * solver.solve(g);
    S.col(j) -= kSqrt2 * I * (root.cast<Complex>().cwiseProduct(trace));
  }
  return S;
}

ThresholdBlocks extract_s(const CMatrix& S, const NodeSystem& node, double phase) {
  const auto& t0 = node.threshold_channels;
  const auto& tp = node.other_channels;
  ThresholdBlocks b;
  b.S0 = block(S, t0, t0);
  b.S_perp = block(S, tp, tp);
  b.S_perp0 = block(S, tp, t0);
  b.S_0perp = block(S, t0, tp);
  const Complex rot = std::exp(2.0 * I * phase);
  b.s = -I * rot * b.S0;
  if (tp.empty()) {
    b.s_reduced = b.s;
  } else {
    const CMatrix gap = CMatrix::Identity(b.S_perp.rows(), b.S_perp.cols()) - b.S_perp;
    b.s_reduced = -I * rot * (b.S0 + b.S_0perp * gap.partialPivLu().solve(b.S_perp0));
  }
  const Complex c = Complex(1.0, 1.0) / kSqrt2;
  CVector weight = CVector::Ones(S.rows());
  for (int k : t0) weight(k) = c;
  b.S_hat = weight.asDiagonal() * S * weight.asDiagonal();
  if (b.s.size() > 0) {
    b.s_symmetry = (b.s - b.s.transpose()).norm();
    b.s_unitarity = identity_defect(b.s);
    b.s_reduced_symmetry = (b.s_reduced - b.s_reduced.transpose()).norm();
    b.s_reduced_unitarity = identity_defect(b.s_reduced);
  }
  return b;
}

KernelCount count_near(const CMatrix& A, Complex target, double tol) {
  KernelCount out;
  if (A.size() == 0) {
    out.kernel.resize(0, 0);
    return out;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(A);
  const CVector values = es.eigenvalues();
  std::vector<Eigen::Index> hits;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double d = std::abs(values(i) - target);
    out.eigenvalues.push_back(values(i));
    out.distances.push_back(d);
    if (d <= tol)
      hits.push_back(i);
    else if (d <= 10.0 * tol)
      ++out.ambiguous;
  }
  out.count = static_cast<int>(hits.size());
  out.kernel.resize(A.rows(), out.count);
  for (int k = 0; k < out.count; ++k) out.kernel.col(k) = es.eigenvectors().col(hits[static_cast<std::size_t>(k)]).normalized();
  if (out.count > 1) {
    // Orthonormal basis of the detected eigenspace.
    Eigen::HouseholderQR<CMatrix> qr(out.kernel);
    out.kernel = qr.householderQ() * CMatrix::Identity(A.rows(), out.count);
  }
  return out;
}

ScatteringReport detect(const JunctionGeometry& geom, const ScatteringOptions& opts) {
  ScatteringReport r;
  r.modes = opts.modes;
  r.phase = opts.phase;
  const auto meshes = node_meshes(geom, opts.h, opts.levels);
  std::vector<CMatrix> levels;
  NodeSystem fine;
  for (const Mesh& mesh : meshes) {
    NodeSystem node = build_node_system(geom, mesh, opts.modes);
    levels.push_back(assemble_S(node));
    r.level_h.push_back(mesh.max_edge_length());
    r.level_unitarity.push_back(identity_defect(levels.back()));
    r.level_s_symmetry.push_back(extract_s(levels.back(), node, opts.phase).s_symmetry);
    fine = std::move(node);
  }
  r.lambda = fine.info.lambda;
  r.threshold_count = fine.info.count;
  r.S_fine = levels.back();
  r.S = levels.size() >= 2 ? CMatrix((4.0 * levels.back() - levels[levels.size() - 2]) / 3.0) : levels.back();
  r.unitarity = r.level_unitarity.back();
  r.blocks = extract_s(r.S, fine, opts.phase);
  r.discretization = (r.blocks.s_reduced - extract_s(r.S_fine, fine, opts.phase).s_reduced).norm();

  r.tol_eig = opts.tol_eig > 0.0 ? opts.tol_eig : std::max({1e-6, 10.0 * r.unitarity, 10.0 * r.discretization});
  r.trapped = count_near(r.blocks.S_perp, Complex(1.0, 0.0), r.tol_eig);
  // -1 of the unrotated s sits at -e^{2i phase} in the rotated basis
  const Complex minus_one = -std::exp(Complex(0.0, 2.0 * opts.phase));
  r.stabilizing = count_near(r.blocks.s_reduced, minus_one, r.tol_eig);
  r.stabilizing_projected = count_near(r.blocks.s, minus_one, r.tol_eig);
  r.bounded = count_near(r.blocks.S_hat, Complex(1.0, 0.0), r.tol_eig);

  if (r.trapped.count > 0 && !fine.threshold_channels.empty())
    r.kernel_propagation = (r.blocks.S_0perp * r.trapped.kernel).colwise().norm().maxCoeff();
  if (r.kernel_propagation > r.tol_eig)
    r.warnings.push_back("trapped kernel leaks into L0: " + std::to_string(r.kernel_propagation));

  r.tolerance_unresolvable = r.trapped.ambiguous + r.stabilizing.ambiguous + r.bounded.ambiguous > 0;
  if (r.tolerance_unresolvable)
    r.warnings.push_back("TOLERANCE_UNRESOLVABLE: eigenvalue between tol_eig and 10 tol_eig from its target");
  r.consistent = r.bounded.count == r.trapped.count + r.stabilizing.count;
  if (!r.consistent) r.warnings.push_back("dim D_bd differs from dim D_tr + dim D_st");
  return r;
}

namespace {

struct PhysicalSystem {
  std::unique_ptr<LU> lu = std::make_unique<LU>();
  double condition_ratio = 0.0;
};

PhysicalSystem physical_system(const NodeSystem& node, double near_singular_ratio) {
  PhysicalSystem sys;
  try {
    factor(*sys.lu, physical_matrix(node));
  } catch (const Error&) {
    throw Error(ErrorCode::NearSingular, "physical radiation system is singular; use the S route");
  }
  LU sym;
  factor(sym, symmetrized_matrix(node));
  const int n = node.dofs.size();
  sys.condition_ratio = inverse_norm(*sys.lu, n) / inverse_norm(sym, n);
  if (!(sys.condition_ratio <= near_singular_ratio))
    throw Error(ErrorCode::NearSingular, "physical system inverse norm exceeds the symmetrized one by " +
                                             std::to_string(sys.condition_ratio));
  return sys;
}

PhysicalSolution physical_solve(const NodeSystem& node, const LU& lu, const CVector& f, const CVector& incoming,
                                double phase) {
  const int k = static_cast<int>(node.threshold_channels.size());
  if (incoming.size() != k) throw Error(ErrorCode::InvalidArgument, "one incoming amplitude per threshold outlet");
  if (f.size() != node.dofs.size()) throw Error(ErrorCode::InvalidArgument, "interior load has the wrong length");
  const CSparseMatrix T = to_complex(node.trace);
  const Complex rot = std::exp(I * phase);
  CVector g = CVector::Zero(node.channels());
  for (int j = 0; j < k; ++j) g(node.threshold_channels[static_cast<std::size_t>(j)]) = kSqrt2 * rot * incoming(j);
  PhysicalSolution out;
  out.u = lu.solve(CVector(f + T.transpose() * g));
  if (!out.u.allFinite()) throw Error(ErrorCode::NearSingular, "non-finite physical solution");
  const CVector a = T * out.u;
  out.outgoing.resize(k);
  for (int j = 0; j < k; ++j)
    out.outgoing(j) = rot * (rot * incoming(j) + kSqrt2 * I * a(node.threshold_channels[static_cast<std::size_t>(j)]));
  return out;
}

}  // namespace

PhysicalSolution solve_physical_reduced(const NodeSystem& node, const CVector& f, const CVector& incoming, double phase,
                                        double near_singular_ratio) {
  const PhysicalSystem sys = physical_system(node, near_singular_ratio);
  PhysicalSolution out = physical_solve(node, *sys.lu, f, incoming, phase);
  out.condition_ratio = sys.condition_ratio;
  return out;
}

PhysicalScattering physical_s(const NodeSystem& node, double phase, double near_singular_ratio) {
  const PhysicalSystem sys = physical_system(node, near_singular_ratio);
  const int k = static_cast<int>(node.threshold_channels.size());
  PhysicalScattering out;
  out.condition_ratio = sys.condition_ratio;
  out.s.resize(k, k);
  const CVector f = CVector::Zero(node.dofs.size());
  for (int j = 0; j < k; ++j) {
    CVector incoming = CVector::Zero(k);
    incoming(j) = 1.0;
    out.s.col(j) = physical_solve(node, *sys.lu, f, incoming, phase).outgoing;
  }
  return out;
}

namespace {

bool barycentric(const Mesh& mesh, std::size_t t, Vec2 x, double& l0, double& l1, double& l2) {
  const auto& tri = mesh.triangles[t];
  const Vec2 a = mesh.vertices[static_cast<std::size_t>(tri[0])];
  const Vec2 b = mesh.vertices[static_cast<std::size_t>(tri[1])];
  const Vec2 c = mesh.vertices[static_cast<std::size_t>(tri[2])];
  const double det = cross(b - a, c - a);
  l1 = cross(x - a, c - a) / det;
  l2 = cross(b - a, x - a) / det;
  l0 = 1.0 - l1 - l2;
  constexpr double eps = -1e-9;
  return l0 >= eps && l1 >= eps && l2 >= eps;
}

}  // namespace

Complex Field::evaluate(Vec2 x) const {
  for (std::size_t t = 0; t < node_mesh.triangles.size(); ++t) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0;
    if (!barycentric(node_mesh, t, x, l0, l1, l2)) continue;
    const auto& tri = node_mesh.triangles[t];
    return factor * (l0 * node_values[static_cast<std::size_t>(tri[0])] + l1 * node_values[static_cast<std::size_t>(tri[1])] +
                     l2 * node_values[static_cast<std::size_t>(tri[2])]);
  }
  for (std::size_t n = 0; n < outlets.size(); ++n) {
    const double y = outlets[n].local_y(x);
    const double z = outlets[n].local_z(x);
    const double tol = 1e-9 * std::max(1.0, outlets[n].width);
    if (z >= -tol && y >= -tol && y <= outlets[n].width + tol) return factor * tails[n].value(y, std::max(z, 0.0));
  }
  return {0.0, 0.0};
}

Field reconstruct_field(const NodeSystem& node, const CMatrix& S, const CVector& coefficients, FieldKind kind,
                        double R_vis) {
  const int m = node.channels();
  const auto& t0 = node.threshold_channels;
  const auto& tp = node.other_channels;
  CVector psi = CVector::Zero(m);
  if (kind == FieldKind::Trapped) {
    if (coefficients.size() == m) {
      psi = coefficients;
    } else if (coefficients.size() == static_cast<Eigen::Index>(tp.size())) {
      for (std::size_t j = 0; j < tp.size(); ++j) psi(tp[j]) = coefficients(static_cast<Eigen::Index>(j));
    } else {
      throw Error(ErrorCode::KernelEmpty, "trapped kernel vector has the wrong length");
    }
  } else {
    if (coefficients.size() != static_cast<Eigen::Index>(t0.size()) || t0.empty())
      throw Error(ErrorCode::KernelEmpty, "stabilizing coefficients need one entry per threshold outlet");
    const ThresholdBlocks b = extract_s(S, node);
    CVector y = CVector::Zero(static_cast<Eigen::Index>(tp.size()));
    if (!tp.empty())
      y = (CMatrix::Identity(b.S_perp.rows(), b.S_perp.cols()) - b.S_perp).partialPivLu().solve(b.S_perp0 * coefficients);
    for (std::size_t j = 0; j < t0.size(); ++j) psi(t0[j]) = I * coefficients(static_cast<Eigen::Index>(j));
    for (std::size_t j = 0; j < tp.size(); ++j) psi(tp[j]) = I * y(static_cast<Eigen::Index>(j));
  }
  if (!(psi.norm() > 0.0)) throw Error(ErrorCode::KernelEmpty, "kernel vector is zero");

  const Eigen::VectorXd root = node.symbol.cwiseSqrt();
  const CVector g = -kSqrt2 * I * root.cast<Complex>().cwiseProduct(psi);
  Field field;
  field.kind = kind;
  field.interior = solve_reduced(node, g);
  const CVector a = to_complex(node.trace) * field.interior;

  field.node_mesh = node.mesh;
  field.node_values.assign(node.mesh.vertices.size(), Complex(0.0, 0.0));
  for (int d = 0; d < node.dofs.size(); ++d)
    field.node_values[static_cast<std::size_t>(node.dofs.vertex_of_dof[static_cast<std::size_t>(d)])] = field.interior(d);
  field.outlets = node.geometry.outlets;
  for (int n = 0; n < node.modal.outlets(); ++n) {
    OutletField tail;
    tail.width = node.spectra[static_cast<std::size_t>(n)].width;
    for (int p = 1; p <= node.modal.modes; ++p) {
      const int c = node.modal.channel(n, p);
      ModeTerm term;
      term.p = p;
      if (std::find(t0.begin(), t0.end(), c) != t0.end()) {
        term.linear0 = a(c);
        term.linear1 = -I * (kSqrt2 * psi(c) - a(c));
      } else {
        term.decay = a(c);
        term.kappa = node.symbol(c);
      }
      tail.terms.push_back(term);
    }
    field.tails.push_back(tail);
  }

  // Unit L2(Omega(2)) norm; the largest value is made real positive.
  const Mesh probe = generate_mesh(truncate(node.geometry, 2.0), node.mesh.h);
  const DofMap probe_dofs = make_dofmap(probe);
  CVector values(probe_dofs.size());
  Complex peak{0.0, 0.0};
  for (int d = 0; d < probe_dofs.size(); ++d) {
    values(d) = field.evaluate(probe.vertices[static_cast<std::size_t>(probe_dofs.vertex_of_dof[static_cast<std::size_t>(d)])]);
    if (std::abs(values(d)) > std::abs(peak) * (1.0 + 1e-12)) peak = values(d);
  }
  const double l2 = std::sqrt(std::abs(values.dot(to_complex(assemble_mass(probe, probe_dofs)) * values)));
  if (!(l2 > 0.0)) throw Error(ErrorCode::KernelEmpty, "reconstructed field vanishes");
  field.factor = std::conj(peak) / (std::abs(peak) * l2);

  field.mesh = generate_mesh(truncate(node.geometry, R_vis), node.mesh.h);
  field.values.reserve(field.mesh.vertices.size());
  for (const Vec2& x : field.mesh.vertices) field.values.push_back(field.evaluate(x));
  return field;
}

void write_field_vtk(std::ostream& os, const Field& field) {
  PointField re{"real", {}}, im{"imag", {}}, mod{"abs", {}};
  for (const Complex& v : field.values) {
    re.values.push_back(v.real());
    im.values.push_back(v.imag());
    mod.values.push_back(std::abs(v));
  }
  write_vtk(os, field.mesh, {re, im, mod});
}

}  // namespace wgt
