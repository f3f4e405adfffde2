#include "wgt/report.hpp"

#include <charconv>
#include <ostream>

#include "wgt/error.hpp"

namespace wgt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfIntersectingPolygon: return "SELF_INTERSECTING_POLYGON";
    case ErrorCode::OutletOverlap: return "OUTLET_OVERLAP";
    case ErrorCode::AttachmentNotOnBoundary: return "ATTACHMENT_NOT_ON_BOUNDARY";
    case ErrorCode::DegenerateDomain: return "DEGENERATE_DOMAIN";
    case ErrorCode::EmptyFace: return "EMPTY_FACE";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::KNotSymmetric: return "K_NOT_SYMMETRIC";
    case ErrorCode::RankDeficientConstraints: return "RANK_DEFICIENT_CONSTRAINTS";
    case ErrorCode::MonotonicityViolation: return "MONOTONICITY_VIOLATION";
    case ErrorCode::EigenvalueAtThreshold: return "EIGENVALUE_AT_THRESHOLD";
    case ErrorCode::ModalOverresolution: return "MODAL_OVERRESOLUTION";
    case ErrorCode::SingularSystem: return "SINGULAR_SYSTEM";
    case ErrorCode::NearSingular: return "NEAR_SINGULAR";
    case ErrorCode::KernelEmpty: return "KERNEL_EMPTY";
    case ErrorCode::RInsideCutoff: return "R_INSIDE_CUTOFF";
    case ErrorCode::PhaseTrackingLost: return "PHASE_TRACKING_LOST";
    case ErrorCode::ConfigParse: return "CONFIG_PARSE";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}


std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

Json to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array(), c = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return Json{{"real", re}, {"imag", im}};
}

Json to_json(const std::vector<Complex>& v) {
  Json re = Json::array(), im = Json::array();
  for (Complex c : v) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return Json{{"real", re}, {"imag", im}};
}

Json cross_section_json(const JunctionGeometry& geom, const std::vector<CrossSectionSpectrum>& spectra,
                        const ThresholdInfo& info) {
  Json j;
  j["command"] = "cross-section";
  j["lambda_dagger"] = info.lambda;
  j["threshold_count"] = info.count;
  j["spectral_gap"] = info.spectral_gap;
  Json outlets = Json::array();
  for (std::size_t n = 0; n < spectra.size(); ++n) {
    Json o;
    o["outlet"] = n;
    o["label"] = geom.outlets[n].label;
    o["width"] = spectra[n].width;
    if (spectra[n].exact_width)
      o["exact_width"] = std::to_string(spectra[n].exact_width->num) + "/" + std::to_string(spectra[n].exact_width->den);
    o["threshold"] = static_cast<bool>(info.is_threshold[n]);
    o["eigenvalues"] = spectra[n].eigenvalues;
    std::vector<Complex> kappa(info.kappa[n].begin(), info.kappa[n].end());
    o["kappa"] = to_json(kappa);
    outlets.push_back(o);
  }
  j["outlets"] = outlets;
  return j;
}

void write_cross_section_csv(std::ostream& os, const std::vector<CrossSectionSpectrum>& spectra, const ThresholdInfo& info) {
  os << "outlet,p,width,Lambda,kappa_re,kappa_im,threshold,lambda_dagger,threshold_count\n";
  for (std::size_t n = 0; n < spectra.size(); ++n)
    for (int p = 1; p <= spectra[n].modes(); ++p) {
      const Complex k = info.kappa[n][static_cast<std::size_t>(p - 1)];
      os << n << ',' << p << ',' << format_number(spectra[n].width) << ','
         << format_number(spectra[n].eigenvalues[static_cast<std::size_t>(p - 1)]) << ',' << format_number(k.real()) << ','
         << format_number(k.imag()) << ',' << (info.is_threshold[n] ? 1 : 0) << ',' << format_number(info.lambda) << ','
         << info.count << '\n';
    }
}

Json absence_json(const AbsenceRun& run) {
  const auto& sw = run.sweep;
  Json j;
  j["command"] = "absence";
  j["verdict"] = run.verdict.absent ? "ABSENT" : "INCONCLUSIVE";
  j["lambda_dagger"] = sw.lambda;
  j["R_star"] = run.verdict.R_star;
  j["margin"] = run.verdict.margin;
  j["error_bar"] = run.verdict.error_bar;
  j["error_factor"] = run.error_factor;
  j["kappa"] = run.kappa.kappa;
  j["kappa_ambiguous"] = run.kappa.ambiguous;
  j["kappa_bracket"] = Json{{"lower", run.kappa.lower_bound},
                            {"upper", run.kappa.upper_bound},
                            {"consistent", run.kappa.consistent},
                            {"dirichlet_values", run.kappa.dirichlet_values},
                            {"dirichlet_error_bars", run.kappa.dirichlet_error_bars}};
  Json limits = Json::array();
  for (std::size_t k = 0; k < sw.limits.size(); ++k) {
    const auto& l = sw.limits[k];
    limits.push_back(Json{{"index", k + 1},
                          {"value", l.value},
                          {"error_bar", l.error_bar},
                          {"rate", l.rate},
                          {"ambiguous", l.ambiguous},
                          {"below_threshold", l.below_threshold}});
  }
  j["limits"] = limits;
  Json violations = Json::array();
  for (const auto& v : sw.violations)
    violations.push_back(Json{{"index", v.index}, {"R0", v.R0}, {"R1", v.R1}, {"drop", v.drop}});
  j["violations"] = violations;
  Json points = Json::array();
  for (const auto& p : sw.points)
    points.push_back(Json{{"R", p.R}, {"values", p.values}, {"error_bars", p.error_bars}, {"per_level", p.per_level}});
  j["points"] = points;
  j["options"] = Json{{"h", run.options.h},
                      {"levels", run.options.levels},
                      {"k", run.options.k},
                      {"fd_step", run.options.fd_step},
                      {"eigen_tol", run.options.eigen.tol},
                      {"seed", run.options.eigen.seed}};
  return j;
}

void write_r_sweep_csv(std::ostream& os, const RSweepResult& sweep) {
  os << "R,k,mu,error_bar";
  const std::size_t levels = sweep.points.empty() ? 0 : sweep.points.front().per_level.size();
  for (std::size_t l = 0; l < levels; ++l) os << ",mu_level" << l;
  os << ",lambda_dagger\n";
  for (const auto& p : sweep.points)
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      os << format_number(p.R) << ',' << k + 1 << ',' << format_number(p.values[k]) << ',' << format_number(p.error_bars[k]);
      for (const auto& level : p.per_level) os << ',' << format_number(level[k]);
      os << ',' << format_number(sweep.lambda) << '\n';
    }
}

namespace {

Json kernel_json(const KernelCount& k) {
  return Json{{"count", k.count}, {"ambiguous", k.ambiguous}, {"eigenvalues", to_json(k.eigenvalues)}, {"distances", k.distances}};
}

}  // namespace

Json scattering_json(const ScatteringReport& r) {
  Json j;
  j["command"] = "detect";
  j["lambda_dagger"] = r.lambda;
  j["threshold_count"] = r.threshold_count;
  j["modes"] = r.modes;
  j["phase"] = r.phase;
  j["tol_eig"] = r.tol_eig;
  j["unitarity"] = r.unitarity;
  j["discretization"] = r.discretization;
  j["level_h"] = r.level_h;
  j["level_unitarity"] = r.level_unitarity;
  j["level_s_symmetry"] = r.level_s_symmetry;
  j["counts"] = Json{{"trapped", r.trapped.count},
                     {"stabilizing", r.stabilizing.count},
                     {"bounded", r.bounded.count},
                     {"stabilizing_projected", r.stabilizing_projected.count}};
  j["consistent"] = r.consistent;
  j["tolerance_unresolvable"] = r.tolerance_unresolvable;
  j["kernel_propagation"] = r.kernel_propagation;
  j["s"] = to_json(r.blocks.s);
  j["s_symmetry"] = r.blocks.s_symmetry;
  j["s_unitarity"] = r.blocks.s_unitarity;
  j["s_reduced"] = to_json(r.blocks.s_reduced);
  j["s_reduced_symmetry"] = r.blocks.s_reduced_symmetry;
  j["s_reduced_unitarity"] = r.blocks.s_reduced_unitarity;
  j["trapped"] = kernel_json(r.trapped);
  j["stabilizing"] = kernel_json(r.stabilizing);
  j["stabilizing_projected"] = kernel_json(r.stabilizing_projected);
  j["bounded"] = kernel_json(r.bounded);
  j["S"] = to_json(r.S);
  j["warnings"] = r.warnings;
  return j;
}

void write_eigenvalues_csv(std::ostream& os, const ScatteringReport& r) {
  os << "operator,index,real,imag,distance,target_real,target_imag\n";
  auto rows = [&](const char* name, const KernelCount& k, Complex target) {
    for (std::size_t i = 0; i < k.eigenvalues.size(); ++i)
      os << name << ',' << i << ',' << format_number(k.eigenvalues[i].real()) << ',' << format_number(k.eigenvalues[i].imag())
         << ',' << format_number(k.distances[i]) << ',' << format_number(target.real()) << ',' << format_number(target.imag())
         << '\n';
  };
  rows("s_reduced", r.stabilizing, {-1.0, 0.0});
  rows("s", r.stabilizing_projected, {-1.0, 0.0});
  rows("S_perp", r.trapped, {1.0, 0.0});
  rows("S_hat", r.bounded, {1.0, 0.0});
}

Json param_sweep_json(const ParamSweepResult& result) {
  Json j;
  j["command"] = "param-sweep";
  Json samples = Json::array();
  for (const auto& s : result.samples)
    samples.push_back(Json{{"t", s.t},
                           {"threshold_count", s.threshold_count},
                           {"tol_eig", s.tol_eig},
                           {"eigenvalues", to_json(s.eigenvalues)},
                           {"phases", s.phases}});
  j["samples"] = samples;
  Json crossings = Json::array();
  for (const auto& c : result.crossings)
    crossings.push_back(Json{{"branch", c.branch}, {"t_lo", c.t_lo}, {"t_hi", c.t_hi}, {"t_star", c.t_star}});
  j["crossings"] = crossings;
  j["persistent"] = result.persistent;
  return j;
}

void write_param_sweep_csv(std::ostream& os, const ParamSweepResult& result) {
  os << "t,branch,real,imag,phase,phase_minus_pi,tol_eig\n";
  for (const auto& s : result.samples)
    for (std::size_t b = 0; b < s.eigenvalues.size(); ++b)
      os << format_number(s.t) << ',' << b << ',' << format_number(s.eigenvalues[b].real()) << ','
         << format_number(s.eigenvalues[b].imag()) << ',' << format_number(s.phases[b]) << ','
         << format_number(offset_from_minus_one(s.phases[b])) << ',' << format_number(s.tol_eig) << '\n';
}

}  // namespace wgt
