#pragma once

#include <vector>

#include "wgt/config.hpp"
#include "wgt/scattering.hpp"

namespace wgt {

/// Threshold scattering data at one knob value. `phases` are unwrapped along
/// the sweep and listed in branch order.
struct PhaseSample {
  double t = 0.0;
  int threshold_count = 0;
  std::vector<Complex> eigenvalues;
  std::vector<double> phases;
  double tol_eig = 0.0;
};

/// Branch whose phase passes through pi (mod 2 pi) inside [t_lo, t_hi].
struct PhaseCrossing {
  int branch = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double t_star = 0.0;
};

struct ParamSweepResult {
  std::vector<PhaseSample> samples;
  std::vector<PhaseCrossing> crossings;
  std::vector<int> persistent;  ///< branches sitting at -1 over the whole grid
};

/// Eigenvalues of s ordered to follow `previous` by nearest phase. Throws
/// PHASE_TRACKING_LOST when the best match still jumps by more than pi/2.
std::vector<Complex> match_branches(const std::vector<Complex>& previous, const std::vector<Complex>& current);

/// Signed distance of the phase from the line pi + 2 pi k nearest to it.
double offset_from_minus_one(double phase);

ParamSweepResult param_sweep(const JunctionSpec& base, const ParamSweepConfig& param, const ScatteringOptions& opts);

}  // namespace wgt
