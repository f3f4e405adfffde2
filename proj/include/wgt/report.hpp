#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wgt/absence.hpp"
#include "wgt/param_sweep.hpp"
#include "wgt/scattering.hpp"

namespace wgt {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// {"real": [[...]], "imag": [[...]]}
Json to_json(const CMatrix& m);
Json to_json(const std::vector<Complex>& v);

Json cross_section_json(const JunctionGeometry& geom, const std::vector<CrossSectionSpectrum>& spectra,
                        const ThresholdInfo& info);
void write_cross_section_csv(std::ostream& os, const std::vector<CrossSectionSpectrum>& spectra, const ThresholdInfo& info);

struct AbsenceRun {
  RSweepResult sweep;
  KappaEstimate kappa;
  AbsenceVerdict verdict;
  double error_factor = 1.0;
  SweepOptions options;
};

Json absence_json(const AbsenceRun& run);
void write_r_sweep_csv(std::ostream& os, const RSweepResult& sweep);

Json scattering_json(const ScatteringReport& report);
void write_eigenvalues_csv(std::ostream& os, const ScatteringReport& report);

Json param_sweep_json(const ParamSweepResult& result);
void write_param_sweep_csv(std::ostream& os, const ParamSweepResult& result);

}  // namespace wgt
