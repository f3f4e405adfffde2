#include "wgt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "wgt/error.hpp"

namespace wgt {

namespace {

using Matrix = Eigen::MatrixXd;

void check_pencil(const SparseMatrix& K, const SparseMatrix& M, int k) {
  if (K.rows() != K.cols() || M.rows() != M.cols() || K.rows() != M.rows()) {
    throw Error(ErrorCode::InvalidArgument, "pencil matrices must be square and of equal size");
  }
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "eigenpair count must be >= 1");
  if (symmetry_defect(K) > 1e-12) throw Error(ErrorCode::KNotSymmetric, "stiffness matrix is not symmetric");
  if (symmetry_defect(M) > 1e-12) throw Error(ErrorCode::KNotSymmetric, "mass matrix is not symmetric");
}

EigenResult finish(const SparseMatrix& K, const SparseMatrix& M, const Eigen::VectorXd& values,
                   const Matrix& vectors, int k, int iterations) {
  EigenResult r;
  r.iterations = iterations;
  r.vectors.resize(vectors.rows(), k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = vectors.col(i);
    const double mn = std::sqrt(v.dot(M * v));
    v /= mn;
    // sign convention: largest-magnitude entry positive
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
    r.vectors.col(i) = v;
    r.values.push_back(values[i]);
    const Eigen::VectorXd mv = M * v;
    r.residuals.push_back((K * v - values[i] * mv).norm() / mv.norm());
  }
  return r;
}

// Rayleigh-Ritz over restarted block Krylov spaces of the shift-inverted pencil.
// `apply` maps a block B to (K - shift M)^{-1} M B inside the admissible subspace;
// `project` maps arbitrary vectors into that subspace.
EigenResult block_krylov(const SparseMatrix& K, const SparseMatrix& M, int k, int admissible_dim,
                         const EigenOptions& opts, const std::function<Matrix(const Matrix&)>& apply,
                         const std::function<Matrix(const Matrix&)>& project) {
  const int n = static_cast<int>(K.rows());
  const int block = std::min(std::max(2 * k, k + 8), admissible_dim);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Matrix X(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = normal(rng);
  X = project(X);

  const int max_dim = std::min(admissible_dim, block * opts.krylov_blocks);
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int cycle = 1; cycle <= opts.max_iterations; ++cycle) {
    Matrix V(n, max_dim);
    Matrix MV(n, max_dim);
    int dim = 0;
    Matrix W = X;
    while (dim < max_dim) {
      const int before = dim;
      for (int j = 0; j < W.cols() && dim < max_dim; ++j) {
        Eigen::VectorXd w = W.col(j);
        const double w0 = std::sqrt(std::max(w.dot(M * w), 0.0));
        if (w0 == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
          if (dim > 0) w -= V.leftCols(dim) * (MV.leftCols(dim).transpose() * w);
        }
        const Eigen::VectorXd mw = M * w;
        const double wn = std::sqrt(std::max(w.dot(mw), 0.0));
        if (wn <= 1e-10 * w0) continue;
        V.col(dim) = w / wn;
        MV.col(dim) = mw / wn;
        ++dim;
      }
      if (dim == before) break;
      W = apply(V.middleCols(before, dim - before));
    }
    if (dim < k) throw Error(ErrorCode::NoConvergence, "Krylov space collapsed below requested size");
    const Matrix Vd = V.leftCols(dim);
    Matrix Kr = Vd.transpose() * (K * Vd);
    Kr = 0.5 * (Kr + Kr.transpose()).eval();
    Matrix Mr = Vd.transpose() * MV.leftCols(dim);
    Mr = 0.5 * (Mr + Mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ritz(Kr, Mr);
    const Matrix Y = Vd * ritz.eigenvectors();
    const Eigen::VectorXd theta = ritz.eigenvalues();
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd y = Y.col(i);
      const Eigen::VectorXd my = M * y;
      worst = std::max(worst, (K * y - theta[i] * my).norm() / my.norm() / (std::abs(theta[i]) + 1.0));
    }
    // Residuals stuck at the roundoff floor count as converged.
    stalled = worst < 0.5 * best ? 0 : stalled + 1;
    best = std::min(best, worst);
    const bool floor = stalled >= 5 && worst <= 100.0 * opts.tol;
    if (worst <= opts.tol || floor || dim >= admissible_dim) return finish(K, M, theta, Y, k, cycle);
    X = Y.leftCols(std::min<Eigen::Index>(block, Y.cols()));
  }
  throw Error(ErrorCode::NoConvergence, "eigensolver exceeded " + std::to_string(opts.max_iterations) + " cycles");
}

EigenResult dense_solve(const SparseMatrix& K, const SparseMatrix& M, const Matrix& nullspace, int k) {
  const Matrix Kd = nullspace.transpose() * (Matrix(K) * nullspace);
  const Matrix Md = nullspace.transpose() * (Matrix(M) * nullspace);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(0.5 * (Kd + Kd.transpose()), 0.5 * (Md + Md.transpose()));
  const Matrix vecs = nullspace * es.eigenvectors();
  return finish(K, M, es.eigenvalues(), vecs, k, 1);
}

}  // namespace

EigenResult smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, int k, const EigenOptions& opts) {
  check_pencil(K, M, k);
  const int n = static_cast<int>(K.rows());
  if (k > n) throw Error(ErrorCode::InvalidArgument, "more eigenpairs requested than unknowns");
  if (n <= opts.dense_cutoff) return dense_solve(K, M, Matrix::Identity(n, n), k);

  const SparseMatrix A = K - opts.shift * M;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "shifted pencil factorization failed");
  auto apply = [&](const Matrix& B) -> Matrix { return ldlt.solve(M * B); };
  auto identity = [](const Matrix& B) -> Matrix { return B; };
  return block_krylov(K, M, k, n, opts, apply, identity);
}

EigenResult constrained_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, const Eigen::MatrixXd& C, int k,
                                   const EigenOptions& opts) {
  if (C.rows() == 0) return smallest_eigenpairs(K, M, k, opts);
  check_pencil(K, M, k);
  const int n = static_cast<int>(K.rows());
  if (C.cols() != n) throw Error(ErrorCode::InvalidArgument, "constraint width does not match pencil");
  const int c = static_cast<int>(C.rows());
  const Matrix CCt = C * C.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> gram(CCt);
  if (gram.eigenvalues().minCoeff() <= 1e-12 * gram.eigenvalues().maxCoeff()) {
    throw Error(ErrorCode::RankDeficientConstraints, "constraint rows are linearly dependent");
  }
  if (k > n - c) throw Error(ErrorCode::InvalidArgument, "more eigenpairs requested than admissible dimension");
  const Eigen::LLT<Matrix> cct(CCt);
  auto project = [&](const Matrix& B) -> Matrix { return B - C.transpose() * cct.solve(C * B); };

  if (n <= opts.dense_cutoff) {
    // orthonormal basis of ker C from a full QR of C^T
    Eigen::HouseholderQR<Matrix> qr(C.transpose());
    const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    return dense_solve(K, M, Q.rightCols(n - c), k);
  }

  const SparseMatrix A = K - opts.shift * M;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "shifted pencil factorization failed");
  const Matrix Y = ldlt.solve(C.transpose());
  const Eigen::LLT<Matrix> schur(C * Y);
  auto apply = [&](const Matrix& B) -> Matrix {
    Matrix X = ldlt.solve(M * B);
    X -= Y * schur.solve(C * X);
    return X;
  };
  return block_krylov(K, M, k, n - c, opts, apply, project);
}

}  // namespace wgt
