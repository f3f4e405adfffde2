#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wgt/fem.hpp"

namespace wgt {

struct EigenOptions {
  double tol = 1e-8;           ///< residual tolerance relative to (|mu| + 1)
  int max_iterations = 100;    ///< restart cycles
  std::uint64_t seed = 20240601;
  double shift = -1.0;         ///< shift-invert pole; must lie below the sought eigenvalues
  int krylov_blocks = 6;       ///< block Krylov steps per restart cycle
  int dense_cutoff = 500;      ///< problems up to this size are solved densely
};

/// Eigenpairs of K v = mu M v, ascending, with M-orthonormal vectors.
struct EigenResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;  ///< ||K v - mu M v|| / ||M v||
  int iterations = 0;
};

EigenResult smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, int k,
                                const EigenOptions& opts = {});

/// Same pencil restricted to {v : C v = 0}; C holds one constraint per row.
EigenResult constrained_eigenpairs(const SparseMatrix& K, const SparseMatrix& M,
                                   const Eigen::MatrixXd& C, int k, const EigenOptions& opts = {});

}  // namespace wgt
