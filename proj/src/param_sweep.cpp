#include "wgt/param_sweep.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <optional>

#include "wgt/error.hpp"

namespace wgt {

namespace {

constexpr double kPi = std::numbers::pi;

double circular(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

PhaseSample sample(const JunctionSpec& base, const ParamSweepConfig& param, const ScatteringOptions& opts, double t) {
  const JunctionGeometry geom = build_junction(apply_knob(base, param.moves, t));
  const ScatteringReport r = detect(geom, opts);
  PhaseSample s;
  s.t = t;
  s.threshold_count = r.threshold_count;
  s.tol_eig = r.tol_eig;
  if (r.blocks.s_reduced.size() > 0) {
    // phases are reported in the unrotated wave basis
    const CMatrix s_plain = std::exp(Complex(0.0, -2.0 * opts.phase)) * r.blocks.s_reduced;
    Eigen::ComplexEigenSolver<CMatrix> es(s_plain, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.eigenvalues.push_back(es.eigenvalues()(i));
  }
  return s;
}

/// Index of the line pi + 2 pi k lying at or below the phase.
long sheet(double phase) { return static_cast<long>(std::floor((phase - kPi) / (2.0 * kPi))); }

}  // namespace

double offset_from_minus_one(double phase) { return std::remainder(phase - kPi, 2.0 * kPi); }

std::vector<Complex> match_branches(const std::vector<Complex>& previous, const std::vector<Complex>& current) {
  if (previous.size() != current.size())
    throw Error(ErrorCode::PhaseTrackingLost, "number of threshold channels changed along the sweep");
  const std::size_t n = current.size();
  std::vector<std::size_t> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) cost += circular(std::arg(current[perm[j]]), std::arg(previous[j]));
    if (cost < best_cost - 1e-14) {
      best_cost = cost;
      best = perm;
    }
  } while (n <= 8 && std::next_permutation(perm.begin(), perm.end()));
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = current[best[j]];
    if (circular(std::arg(out[j]), std::arg(previous[j])) > 0.5 * kPi)
      throw Error(ErrorCode::PhaseTrackingLost, "eigenvalue phase jumped by more than pi/2; refine the grid");
  }
  return out;
}

ParamSweepResult param_sweep(const JunctionSpec& base, const ParamSweepConfig& param, const ScatteringOptions& opts) {
  if (param.grid.empty()) throw Error(ErrorCode::InvalidArgument, "parameter grid is empty");
  if (!std::is_sorted(param.grid.begin(), param.grid.end()) ||
      std::adjacent_find(param.grid.begin(), param.grid.end()) != param.grid.end())
    throw Error(ErrorCode::InvalidArgument, "parameter grid must be strictly ascending");

  ParamSweepResult out;
  for (double t : param.grid) {
    PhaseSample s = sample(base, param, opts, t);
    if (out.samples.empty()) {
      std::sort(s.eigenvalues.begin(), s.eigenvalues.end(),
                [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
      for (Complex e : s.eigenvalues) s.phases.push_back(std::arg(e));
    } else {
      const PhaseSample& prev = out.samples.back();
      if (s.threshold_count != prev.threshold_count)
        throw Error(ErrorCode::PhaseTrackingLost, "threshold outlet count changed at t = " + std::to_string(t));
      s.eigenvalues = match_branches(prev.eigenvalues, s.eigenvalues);
      for (std::size_t j = 0; j < s.eigenvalues.size(); ++j)
        s.phases.push_back(prev.phases[j] + std::remainder(std::arg(s.eigenvalues[j]) - prev.phases[j], 2.0 * kPi));
    }
    out.samples.push_back(std::move(s));
  }

  const std::size_t branches = out.samples.front().eigenvalues.size();
  for (std::size_t j = 0; j < branches; ++j) {
    auto on_line = [&](const PhaseSample& s) { return std::abs(offset_from_minus_one(s.phases[j])) <= s.tol_eig; };
    if (std::all_of(out.samples.begin(), out.samples.end(), on_line)) {
      out.persistent.push_back(static_cast<int>(j));
      continue;
    }
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      if (on_line(out.samples[i])) continue;
      if (last && sheet(out.samples[*last].phases[j]) != sheet(out.samples[i].phases[j])) {
        PhaseSample lo = out.samples[*last];
        double hi = out.samples[i].t;
        const long lo_sheet = sheet(lo.phases[j]);
        double t_star = 0.5 * (lo.t + hi);
        for (int step = 0; step < param.bisection_steps && hi - lo.t > 1e-12; ++step) {
          const double mid = 0.5 * (lo.t + hi);
          PhaseSample m = sample(base, param, opts, mid);
          if (m.threshold_count != lo.threshold_count)
            throw Error(ErrorCode::PhaseTrackingLost, "threshold outlet count changed at t = " + std::to_string(mid));
          m.eigenvalues = match_branches(lo.eigenvalues, m.eigenvalues);
          for (std::size_t b = 0; b < m.eigenvalues.size(); ++b)
            m.phases.push_back(lo.phases[b] + std::remainder(std::arg(m.eigenvalues[b]) - lo.phases[b], 2.0 * kPi));
          t_star = mid;
          if (std::abs(offset_from_minus_one(m.phases[j])) <= 1e-3 * m.tol_eig) break;
          if (sheet(m.phases[j]) == lo_sheet)
            lo = std::move(m);
          else
            hi = mid;
          t_star = 0.5 * (lo.t + hi);
        }
        out.crossings.push_back({static_cast<int>(j), out.samples[*last].t, out.samples[i].t, t_star});
      }
      last = i;
    }
  }
  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const PhaseCrossing& a, const PhaseCrossing& b) { return a.t_lo < b.t_lo || (a.t_lo == b.t_lo && a.branch < b.branch); });
  return out;
}

}  // namespace wgt
