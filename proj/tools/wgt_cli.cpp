// wgt: threshold resonance analysis for waveguide junctions.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "wgt/absence.hpp"
#include "wgt/config.hpp"
#include "wgt/error.hpp"
#include "wgt/param_sweep.hpp"
#include "wgt/report.hpp"
#include "wgt/scattering.hpp"

namespace fs = std::filesystem;
using namespace wgt;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInconclusive = 2;
constexpr int kNumerical = 3;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> refine;
  std::optional<int> modes;
  double R = 0.0;
};

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir / name).string());
  return os;
}

void write_json(const fs::path& dir, const std::string& name, const Json& j) { open_out(dir, name) << j.dump(2) << '\n'; }

int cross_section(const RunConfig& cfg, const fs::path& out) {
  const JunctionGeometry geom = build_junction(cfg.geometry);
  const auto spectra = outlet_spectra(geom, cfg.scattering.modes);
  const ThresholdInfo info = threshold(spectra);
  auto csv = open_out(out, "cross_section.csv");
  write_cross_section_csv(csv, spectra, info);
  write_json(out, "cross_section.json", cross_section_json(geom, spectra, info));
  std::cout << "lambda_dagger " << format_number(info.lambda) << "  threshold outlets " << info.count << '\n';
  return kOk;
}

int absence(const RunConfig& cfg, const fs::path& out) {
  const JunctionGeometry geom = build_junction(cfg.geometry);
  AbsenceRun run;
  run.options = cfg.sweep;
  run.error_factor = cfg.error_factor;
  run.sweep = r_sweep(geom, cfg.R_grid, cfg.sweep, true);
  run.kappa = estimate_kappa(run.sweep, &geom, cfg.sweep);
  run.verdict = absence_verdict(run.sweep, run.kappa.kappa, cfg.error_factor);
  auto csv = open_out(out, "r_sweep.csv");
  write_r_sweep_csv(csv, run.sweep);
  write_json(out, "absence.json", absence_json(run));
  if (run.verdict.absent)
    std::cout << "ABSENT(" << format_number(run.verdict.R_star) << ")";
  else
    std::cout << "INCONCLUSIVE";
  std::cout << "  kappa " << run.kappa.kappa << "  margin " << format_number(run.verdict.margin) << "  error bar "
            << format_number(run.verdict.error_bar) << '\n';
  if (!run.sweep.violations.empty()) {
    std::cerr << "MONOTONICITY_VIOLATION: " << run.sweep.violations.size() << " pair(s), see absence.json\n";
    return kNumerical;
  }
  return run.verdict.absent ? kOk : kInconclusive;
}

void export_fields(const RunConfig& cfg, const JunctionGeometry& geom, const ScatteringReport& report, const fs::path& out) {
  if (report.trapped.count == 0 && report.stabilizing.count == 0) return;
  const auto meshes = node_meshes(geom, cfg.scattering.h, cfg.scattering.levels);
  const NodeSystem node = build_node_system(geom, meshes.back(), cfg.scattering.modes);
  auto emit = [&](const KernelCount& k, FieldKind kind, const std::string& stem) {
    for (Eigen::Index c = 0; c < k.kernel.cols(); ++c) {
      const Field f = reconstruct_field(node, report.S, k.kernel.col(c), kind, cfg.R_vis);
      auto os = open_out(out, stem + "_" + std::to_string(c) + ".vtk");
      write_field_vtk(os, f);
    }
  };
  emit(report.trapped, FieldKind::Trapped, "field_trapped");
  emit(report.stabilizing, FieldKind::Stabilizing, "field_stabilizing");
}

int detect_cmd(const RunConfig& cfg, const fs::path& out) {
  const JunctionGeometry geom = build_junction(cfg.geometry);
  const ScatteringReport report = detect(geom, cfg.scattering);
  write_json(out, "scattering.json", scattering_json(report));
  auto csv = open_out(out, "eigenvalues.csv");
  write_eigenvalues_csv(csv, report);
  export_fields(cfg, geom, report, out);
  std::cout << "D_tr " << report.trapped.count << "  D_st " << report.stabilizing.count << "  D_bd " << report.bounded.count
            << "  tol_eig " << format_number(report.tol_eig) << "  unitarity " << format_number(report.unitarity) << '\n';
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  return report.tolerance_unresolvable || !report.consistent ? kInconclusive : kOk;
}

int param_sweep_cmd(const RunConfig& cfg, const fs::path& out) {
  if (cfg.param.moves.empty()) throw Error(ErrorCode::ConfigParse, "param_sweep.moves is required");
  const ParamSweepResult result = param_sweep(cfg.geometry, cfg.param, cfg.scattering);
  auto csv = open_out(out, "param_sweep.csv");
  write_param_sweep_csv(csv, result);
  auto cross = open_out(out, "crossings.csv");
  cross << "branch,t_lo,t_hi,t_star\n";
  for (const auto& c : result.crossings)
    cross << c.branch << ',' << format_number(c.t_lo) << ',' << format_number(c.t_hi) << ',' << format_number(c.t_star) << '\n';
  write_json(out, "param_sweep.json", param_sweep_json(result));
  std::cout << result.samples.size() << " samples  " << result.crossings.size() << " crossing(s)  "
            << result.persistent.size() << " persistent -1 branch(es)\n";
  if (result.samples.size() == 1) {
    RunConfig single = cfg;
    single.geometry = apply_knob(cfg.geometry, cfg.param.moves, cfg.param.grid.front());
    return detect_cmd(single, out);
  }
  return kOk;
}

int export_mesh(const RunConfig& cfg, const fs::path& out, double R) {
  const JunctionGeometry geom = build_junction(cfg.geometry);
  Mesh mesh = generate_mesh(truncate(geom, R), cfg.sweep.h);
  for (int l = 1; l < cfg.sweep.levels; ++l) mesh = refine(mesh);
  auto vtk = open_out(out, "mesh.vtk");
  write_vtk(vtk, mesh);
  Json j;
  j["command"] = "export-mesh";
  j["R"] = R;
  j["h"] = mesh.h;
  j["vertices"] = mesh.vertices.size();
  j["triangles"] = mesh.triangles.size();
  j["boundary_edges"] = mesh.boundary_edges.size();
  j["area"] = mesh.area();
  j["max_edge_length"] = mesh.max_edge_length();
  write_json(out, "mesh.json", j);
  std::cout << mesh.vertices.size() << " vertices  " << mesh.triangles.size() << " triangles\n";
  return kOk;
}

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigParse:
    case ErrorCode::InvalidArgument:
    case ErrorCode::SelfIntersectingPolygon:
    case ErrorCode::OutletOverlap:
    case ErrorCode::AttachmentNotOnBoundary:
    case ErrorCode::DegenerateDomain: return true;
    default: return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold resonances of waveguide junctions"};
  app.require_subcommand(1);
  Flags flags;
  std::string command;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory (default from config)");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--refine", flags.refine, "refinement levels (>= 1)")->check(CLI::PositiveNumber);
    sub->add_option("--modes", flags.modes, "cross-section modes per outlet")->check(CLI::PositiveNumber);
    sub->callback([&, name] { command = name; });
    return sub;
  };
  add("cross-section", "cross-section spectra, threshold and exponents");
  add("absence", "R-sweep of the mixed problem and the absence verdict");
  add("detect", "threshold scattering operator and bounded-solution counts");
  add("param-sweep", "phases of s along a geometry knob");
  add("export-mesh", "mesh of the truncated domain as VTK")->add_option("--R", flags.R, "truncation length");
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(flags.config);
    if (flags.seed) {
      cfg.seed = *flags.seed;
      cfg.sweep.eigen.seed = *flags.seed;
    }
    if (flags.refine) cfg.sweep.levels = cfg.scattering.levels = *flags.refine;
    if (flags.modes) cfg.scattering.modes = *flags.modes;
    const fs::path out = flags.out.empty() ? fs::path(cfg.out) : fs::path(flags.out);
    fs::create_directories(out);
    if (command == "cross-section") return cross_section(cfg, out);
    if (command == "absence") return absence(cfg, out);
    if (command == "detect") return detect_cmd(cfg, out);
    if (command == "param-sweep") return param_sweep_cmd(cfg, out);
    return export_mesh(cfg, out, flags.R);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return is_input_error(e.code()) ? kUsage : kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kNumerical;
  }
}
