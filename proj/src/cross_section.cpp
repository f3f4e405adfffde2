#include "wgt/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wgt/error.hpp"

namespace wgt {

double CrossSectionSpectrum::eigenfunction(int p, double y) const {
  return std::sqrt(2.0 / width) * std::sin(p * std::numbers::pi * y / width);
}

double CrossSectionSpectrum::eigenfunction_dy(int p, double y) const {
  const double k = p * std::numbers::pi / width;
  return std::sqrt(2.0 / width) * k * std::cos(k * y);
}

CrossSectionSpectrum interval_spectrum(double width, int modes) {
  if (!(width > 0.0) || modes < 1) throw Error(ErrorCode::InvalidArgument, "interval spectrum needs w > 0 and P >= 1");
  CrossSectionSpectrum s;
  s.width = width;
  for (int p = 1; p <= modes; ++p) {
    const double k = p * std::numbers::pi / width;
    s.eigenvalues.push_back(k * k);
  }
  return s;
}

CrossSectionSpectrum interval_spectrum(const OutletSpec& outlet, int modes) {
  auto s = interval_spectrum(outlet.width, modes);
  s.exact_width = outlet.exact_width;
  return s;
}

std::vector<CrossSectionSpectrum> outlet_spectra(const JunctionGeometry& geom, int modes) {
  std::vector<CrossSectionSpectrum> out;
  for (const auto& o : geom.outlets) out.push_back(interval_spectrum(o, modes));
  return out;
}

std::vector<int> ThresholdInfo::threshold_outlets() const {
  std::vector<int> out;
  for (std::size_t n = 0; n < is_threshold.size(); ++n)
    if (is_threshold[n]) out.push_back(static_cast<int>(n));
  return out;
}

namespace {

// Widest outlets carry the smallest Lambda_1.
bool same_width(const CrossSectionSpectrum& a, const CrossSectionSpectrum& b) {
  if (a.exact_width && b.exact_width) return *a.exact_width == *b.exact_width;
  return std::abs(a.width - b.width) <= 1e-12 * std::max(a.width, b.width);
}

}  // namespace

ThresholdInfo threshold(const std::vector<CrossSectionSpectrum>& spectra) {
  if (spectra.empty()) throw Error(ErrorCode::InvalidArgument, "threshold needs at least one outlet");
  std::size_t widest = 0;
  for (std::size_t n = 1; n < spectra.size(); ++n) {
    const bool wider = (spectra[n].exact_width && spectra[widest].exact_width)
                           ? *spectra[widest].exact_width < *spectra[n].exact_width
                           : spectra[n].width > spectra[widest].width;
    if (wider) widest = n;
  }
  ThresholdInfo info;
  info.lambda = spectra[widest].eigenvalues.front();
  info.is_threshold.resize(spectra.size());
  for (std::size_t n = 0; n < spectra.size(); ++n) {
    info.is_threshold[n] = same_width(spectra[n], spectra[widest]);
    if (info.is_threshold[n]) ++info.count;
  }
  for (std::size_t n = 0; n < spectra.size(); ++n) info.order.push_back(static_cast<int>(n));
  std::stable_sort(info.order.begin(), info.order.end(), [&](int a, int b) {
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    if (info.is_threshold[ua] != info.is_threshold[ub]) return static_cast<bool>(info.is_threshold[ua]);
    return spectra[ua].eigenvalues.front() < spectra[ub].eigenvalues.front();
  });
  info.spectral_gap = 1e300;
  info.kappa.resize(spectra.size());
  for (std::size_t n = 0; n < spectra.size(); ++n) {
    for (int p = 1; p <= spectra[n].modes(); ++p) {
      if (p == 1 && info.is_threshold[n]) {
        info.kappa[n].emplace_back(0.0, -1.0);
      } else {
        const double gap = spectra[n].eigenvalues[static_cast<std::size_t>(p - 1)] - info.lambda;
        info.kappa[n].emplace_back(std::sqrt(std::max(gap, 0.0)), 0.0);
      }
    }
    const double second = std::pow(2.0 * std::numbers::pi / spectra[n].width, 2);
    info.spectral_gap = std::min(info.spectral_gap, second - info.lambda);
  }
  return info;
}

}  // namespace wgt
