#include "wgt/absence.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wgt/error.hpp"
#include "wgt/modal.hpp"

namespace wgt {

namespace {

std::vector<Mesh> mesh_levels(const JunctionGeometry& geom, double R, const SweepOptions& opts) {
  if (opts.levels < 1) throw Error(ErrorCode::InvalidArgument, "refinement levels must be >= 1");
  std::vector<Mesh> levels;
  levels.push_back(generate_mesh(truncate(geom, R), opts.h));
  for (int l = 1; l < opts.levels; ++l) levels.push_back(refine(levels.back()));
  return levels;
}

double threshold_of(const JunctionGeometry& geom) { return threshold(outlet_spectra(geom, 2)).lambda; }

}  // namespace

const std::vector<double>& default_R_grid() {
  static const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0};
  return grid;
}

MixedEigenvalues mixed_eigenvalues(const JunctionGeometry& geom, double R, const SweepOptions& opts,
                                   bool faces_dirichlet) {
  MixedEigenvalues out;
  out.R = R;
  for (const Mesh& mesh : mesh_levels(geom, R, opts)) {
    const DofMap dofs = make_dofmap(mesh, faces_dirichlet);
    const auto res = smallest_eigenpairs(assemble_stiffness(mesh, dofs), assemble_mass(mesh, dofs), opts.k, opts.eigen);
    out.per_level.push_back(res.values);
  }
  const auto& fine = out.per_level.back();
  for (int j = 0; j < opts.k; ++j) {
    if (out.per_level.size() < 2) {
      out.values.push_back(fine[static_cast<std::size_t>(j)]);
      out.error_bars.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const double coarse = out.per_level[out.per_level.size() - 2][static_cast<std::size_t>(j)];
    const double f = fine[static_cast<std::size_t>(j)];
    out.values.push_back((4.0 * f - coarse) / 3.0);
    out.error_bars.push_back(std::abs(f - coarse) + 1e-10 * (std::abs(f) + 1.0));
  }
  return out;
}

RSweepResult r_sweep(const JunctionGeometry& geom, const std::vector<double>& R_grid, const SweepOptions& opts,
                     bool allow_violations) {
  if (R_grid.size() < 3) throw Error(ErrorCode::InvalidArgument, "R grid needs at least three points");
  if (!std::is_sorted(R_grid.begin(), R_grid.end()) ||
      std::adjacent_find(R_grid.begin(), R_grid.end()) != R_grid.end()) {
    throw Error(ErrorCode::InvalidArgument, "R grid must be strictly ascending");
  }
  RSweepResult sweep;
  sweep.lambda = threshold_of(geom);
  sweep.R_grid = R_grid;
  for (double R : R_grid) sweep.points.push_back(mixed_eigenvalues(geom, R, opts));

  const double lambda = sweep.lambda;
  for (int j = 0; j < opts.k; ++j) {
    const auto J = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i + 1 < sweep.points.size(); ++i) {
      const auto& a = sweep.points[i];
      const auto& b = sweep.points[i + 1];
      if (a.values[J] >= lambda) continue;
      const double drop = a.values[J] - b.values[J];
      if (drop > a.error_bars[J] + b.error_bars[J]) {
        sweep.violations.push_back({j + 1, a.R, b.R, drop});
      }
    }
  }
  if (!sweep.violations.empty() && !allow_violations) {
    const auto& v = sweep.violations.front();
    throw Error(ErrorCode::MonotonicityViolation, "mu_" + std::to_string(v.index) + " drops by " +
                                                      std::to_string(v.drop) + " between R=" + std::to_string(v.R0) +
                                                      " and R=" + std::to_string(v.R1));
  }

  // Limits from the last three grid points, fitting mu_inf - c exp(-2 alpha R).
  const std::size_t m = sweep.points.size();
  const double R1 = R_grid[m - 3], R2 = R_grid[m - 2], R3 = R_grid[m - 1];
  for (int j = 0; j < opts.k; ++j) {
    const auto J = static_cast<std::size_t>(j);
    const double mu1 = sweep.points[m - 3].values[J], mu2 = sweep.points[m - 2].values[J];
    const double mu3 = sweep.points[m - 1].values[J], eb3 = sweep.points[m - 1].error_bars[J];
    const double eb2 = sweep.points[m - 2].error_bars[J];
    const double d1 = mu2 - mu1, d2 = mu3 - mu2;
    CurveLimit lim;
    if (std::abs(d2) <= eb2 + eb3 || mu3 >= lambda) {
      lim.value = mu3;
      lim.error_bar = eb3 + std::abs(d2);
    } else if (d1 > d2 && d2 > 0) {
      const double target = d2 / d1;
      auto ratio = [&](double alpha) {
        return (std::exp(-2 * alpha * R2) - std::exp(-2 * alpha * R3)) /
               (std::exp(-2 * alpha * R1) - std::exp(-2 * alpha * R2));
      };
      // ratio decreases from (R3-R2)/(R2-R1) at alpha -> 0 towards 0
      double lo = 1e-8, hi = 50.0;
      if (ratio(lo) <= target) {
        lim.value = lambda;
        lim.error_bar = std::abs(lambda - mu3) + eb3;
        lim.ambiguous = true;
      } else {
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (ratio(mid) > target ? lo : hi) = mid;
        }
        const double alpha = 0.5 * (lo + hi);
        const double c = d2 / (std::exp(-2 * alpha * R2) - std::exp(-2 * alpha * R3));
        const double tail = c * std::exp(-2 * alpha * R3);
        lim.value = mu3 + tail;
        lim.rate = alpha;
        lim.error_bar = eb3 + 0.5 * std::abs(tail);
      }
    } else {
      // increments not decaying geometrically: the curve creeps towards the threshold
      lim.value = lambda;
      lim.error_bar = std::abs(lambda - mu3) + eb3;
      lim.ambiguous = true;
    }
    if (std::abs(lim.value - lambda) <= lim.error_bar) lim.ambiguous = true;
    lim.below_threshold = !lim.ambiguous && lim.value < lambda;
    sweep.limits.push_back(lim);
  }
  return sweep;
}

KappaEstimate estimate_kappa(const RSweepResult& sweep, const JunctionGeometry* geom, const SweepOptions& opts) {
  KappaEstimate est;
  const double lambda = sweep.lambda;
  for (const auto& lim : sweep.limits) {
    if (lim.below_threshold) ++est.kappa;
    else if (lim.ambiguous) ++est.ambiguous;
  }
  const auto& last = sweep.points.back();
  for (std::size_t j = 0; j < last.values.size(); ++j) {
    if (last.values[j] + last.error_bars[j] < lambda) ++est.upper_bound;
  }
  est.lower_bound = 0;
  if (geom != nullptr) {
    const auto dir = mixed_eigenvalues(*geom, sweep.R_grid.back(), opts, true);
    est.dirichlet_values = dir.values;
    est.dirichlet_error_bars = dir.error_bars;
    for (std::size_t j = 0; j < dir.values.size(); ++j) {
      if (dir.values[j] + dir.error_bars[j] < lambda) ++est.lower_bound;
    }
    est.consistent = est.lower_bound <= est.kappa && est.kappa <= est.upper_bound;
  } else {
    est.consistent = est.kappa <= est.upper_bound;
  }
  return est;
}

AbsenceVerdict absence_verdict(const RSweepResult& sweep, int kappa, double error_factor) {
  AbsenceVerdict v;
  v.kappa = kappa;
  v.margin = -std::numeric_limits<double>::infinity();
  const auto idx = static_cast<std::size_t>(kappa);
  for (const auto& p : sweep.points) {
    if (idx >= p.values.size()) break;
    const double margin = p.values[idx] - sweep.lambda;
    if (margin > error_factor * p.error_bars[idx]) {
      v.absent = true;
      v.R_star = p.R;
      v.margin = margin;
      v.error_bar = p.error_bars[idx];
      return v;
    }
    if (margin > v.margin) {
      v.margin = margin;
      v.R_star = p.R;
      v.error_bar = p.error_bars[idx];
    }
  }
  return v;
}

namespace {

Mesh finest_mesh(const JunctionGeometry& geom, double R, const SweepOptions& opts) {
  Mesh mesh = generate_mesh(truncate(geom, R), opts.h);
  for (int l = 1; l < opts.levels; ++l) mesh = refine(mesh);
  return mesh;
}

std::vector<double> fine_eigenvalues(const JunctionGeometry& geom, double R, int count, const SweepOptions& opts) {
  const Mesh mesh = finest_mesh(geom, R, opts);
  const DofMap dofs = make_dofmap(mesh);
  return smallest_eigenpairs(assemble_stiffness(mesh, dofs), assemble_mass(mesh, dofs), count, opts.eigen).values;
}

}  // namespace

SlopeReport eigenvalue_slope(const JunctionGeometry& geom, double R, int k, const SweepOptions& opts) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "eigenvalue index is 1-based");
  const double lambda = threshold_of(geom);
  const Mesh mesh = finest_mesh(geom, R, opts);
  const DofMap dofs = make_dofmap(mesh);
  const int count = k + 3;
  const auto eig = smallest_eigenpairs(assemble_stiffness(mesh, dofs), assemble_mass(mesh, dofs), count, opts.eigen);

  // group eigenvalues numerically equal to mu_k
  int first = k - 1, last = k - 1;
  auto close = [&](int a, int b) {
    const double x = eig.values[static_cast<std::size_t>(a)], y = eig.values[static_cast<std::size_t>(b)];
    return std::abs(x - y) <= 1e-6 * std::max(std::abs(x), 1.0);
  };
  while (first > 0 && close(first - 1, first)) --first;
  while (last + 1 < count - 1 && close(last, last + 1)) ++last;

  SlopeReport rep;
  rep.index = k;
  rep.R = R;
  rep.multiplicity = last - first + 1;
  for (int j = first; j <= last; ++j) rep.eigenvalues.push_back(eig.values[static_cast<std::size_t>(j)]);
  const double mu = rep.eigenvalues.front();
  if (rep.eigenvalues.back() >= lambda * (1.0 - 1e-6)) {
    throw Error(ErrorCode::EigenvalueAtThreshold, "eigenvalue group at R=" + std::to_string(R) +
                                                      " is not below the threshold");
  }

  SparseMatrix face_form(dofs.size(), dofs.size());
  for (int n = 0; n < static_cast<int>(geom.outlet_count()); ++n) {
    face_form += face_gram(mesh, dofs, n, FaceForm::TangentialStiffness) - mu * face_gram(mesh, dofs, n, FaceForm::Mass);
  }
  const Eigen::MatrixXd V = eig.vectors.middleCols(first, rep.multiplicity);
  Eigen::MatrixXd A = V.transpose() * (face_form * V);
  A = 0.5 * (A + A.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  for (int i = 0; i < rep.multiplicity; ++i) rep.slopes.push_back(es.eigenvalues()[i]);

  const double r = opts.fd_step;
  const double lo = R >= r ? R - r : R;
  const double hi = R + r;
  const auto ev_hi = fine_eigenvalues(geom, hi, count, opts);
  const auto ev_lo = lo == R ? eig.values : fine_eigenvalues(geom, lo, count, opts);
  for (int j = first; j <= last; ++j) {
    const auto J = static_cast<std::size_t>(j);
    rep.finite_differences.push_back((ev_hi[J] - ev_lo[J]) / (hi - lo));
  }
  std::sort(rep.finite_differences.begin(), rep.finite_differences.end());
  for (int i = 0; i < rep.multiplicity; ++i) {
    const auto I = static_cast<std::size_t>(i);
    const double scale = std::max(std::abs(rep.finite_differences[I]), 1e-300);
    rep.max_relative_mismatch = std::max(rep.max_relative_mismatch, std::abs(rep.slopes[I] - rep.finite_differences[I]) / scale);
  }
  return rep;
}

SufficientConditionResult no_trapped_sufficient(const JunctionGeometry& geom, const SweepOptions& opts) {
  const auto spectra = outlet_spectra(geom, 1);
  const auto info = threshold(spectra);
  SufficientConditionResult res;
  res.lambda = info.lambda;
  res.constraints = info.count;
  std::vector<double> mu;
  for (const Mesh& mesh : mesh_levels(geom, 0.0, opts)) {
    const DofMap dofs = make_dofmap(mesh);
    const auto modal = build_modal_maps(mesh, dofs, spectra, 1);
    Eigen::MatrixXd C(info.count, dofs.size());
    int row = 0;
    for (int n : info.threshold_outlets()) {
      C.row(row++) = Eigen::MatrixXd(modal.per_outlet[static_cast<std::size_t>(n)]).row(0);
    }
    const auto eig = constrained_eigenpairs(assemble_stiffness(mesh, dofs), assemble_mass(mesh, dofs), C, 1, opts.eigen);
    mu.push_back(eig.values.front());
  }
  if (mu.size() >= 2) {
    const double f = mu.back(), c = mu[mu.size() - 2];
    res.mu1 = (4.0 * f - c) / 3.0;
    res.error_bar = std::abs(f - c) + 1e-10 * (std::abs(f) + 1.0);
  } else {
    res.mu1 = mu.back();
    res.error_bar = std::numeric_limits<double>::infinity();
  }
  res.holds = res.mu1 - res.lambda > res.error_bar;
  return res;
}

}  // namespace wgt
