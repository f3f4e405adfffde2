#pragma once

#include <optional>
#include <vector>

#include "wgt/cross_section.hpp"
#include "wgt/geometry.hpp"
#include "wgt/spectral.hpp"

namespace wgt {

struct SweepOptions {
  double h = 0.1;       ///< coarse mesh size
  int levels = 2;       ///< meshes h, h/2, ...; the last two feed Richardson extrapolation
  int k = 4;            ///< eigenvalues per truncation length
  EigenOptions eigen;
  double fd_step = 0.1; ///< finite-difference step for slope checks
};

/// First eigenvalues of the mixed problem on Omega(R), extrapolated over two
/// refinements; error_bars[j] = |mu_fine - mu_coarse|.
struct MixedEigenvalues {
  double R = 0.0;
  std::vector<double> values;
  std::vector<double> error_bars;
  std::vector<std::vector<double>> per_level;
};

/// Neumann on the truncation faces by default; `faces_dirichlet` gives the
/// upper-bound problem used for bracketing.
MixedEigenvalues mixed_eigenvalues(const JunctionGeometry& geom, double R, const SweepOptions& opts,
                                   bool faces_dirichlet = false);

struct CurveLimit {
  double value = 0.0;
  double error_bar = 0.0;
  double rate = 0.0;       ///< fitted alpha in mu_inf - c exp(-2 alpha R)
  bool ambiguous = false;  ///< limit indistinguishable from the threshold
  bool below_threshold = false;
};

struct MonotonicityViolation {
  int index = 0;
  double R0 = 0.0;
  double R1 = 0.0;
  double drop = 0.0;
};

struct RSweepResult {
  double lambda = 0.0;
  std::vector<double> R_grid;
  std::vector<MixedEigenvalues> points;
  std::vector<CurveLimit> limits;  ///< one per eigenvalue index
  std::vector<MonotonicityViolation> violations;
};

/// Throws MonotonicityViolation errors unless `allow_violations` is set, in
/// which case they are recorded in the result.
RSweepResult r_sweep(const JunctionGeometry& geom, const std::vector<double>& R_grid, const SweepOptions& opts,
                     bool allow_violations = false);

const std::vector<double>& default_R_grid();

struct KappaEstimate {
  int kappa = 0;
  int ambiguous = 0;   ///< curves whose limit sits within error of the threshold
  int lower_bound = 0; ///< Dirichlet-truncated eigenvalues below threshold at the largest R
  int upper_bound = 0; ///< Neumann-truncated eigenvalues below threshold at the largest R
  bool consistent = true;
  std::vector<double> dirichlet_values;
  std::vector<double> dirichlet_error_bars;
};

/// Counts extrapolated limits below the threshold; when `geom` is provided the
/// count is bracketed by Dirichlet-truncated eigenvalues at the largest grid R.
KappaEstimate estimate_kappa(const RSweepResult& sweep, const JunctionGeometry* geom = nullptr,
                             const SweepOptions& opts = {});

struct AbsenceVerdict {
  bool absent = false;
  double R_star = 0.0;
  double margin = 0.0;     ///< mu_{kappa+1} - lambda at R_star (or best grid point)
  double error_bar = 0.0;
  int kappa = 0;
};

AbsenceVerdict absence_verdict(const RSweepResult& sweep, int kappa, double error_factor = 1.0);

struct SlopeReport {
  int index = 0;            ///< 1-based eigenvalue index k
  int multiplicity = 1;
  double R = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> slopes;   ///< eigenvalues of A, ascending
  std::vector<double> finite_differences;
  double max_relative_mismatch = 0.0;
};

SlopeReport eigenvalue_slope(const JunctionGeometry& geom, double R, int k, const SweepOptions& opts);

struct SufficientConditionResult {
  bool holds = false;
  double mu1 = 0.0;
  double error_bar = 0.0;
  double lambda = 0.0;
  int constraints = 0;
};

SufficientConditionResult no_trapped_sufficient(const JunctionGeometry& geom, const SweepOptions& opts);

}  // namespace wgt
