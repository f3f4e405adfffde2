#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "wgt/geometry.hpp"

namespace wgt {

/// Dirichlet spectrum of the interval (0, w): Lambda_p = (p pi / w)^2 with
/// Phi_p(y) = sqrt(2/w) sin(p pi y / w).
struct CrossSectionSpectrum {
  double width = 0.0;
  std::optional<Rational> exact_width;
  std::vector<double> eigenvalues;

  int modes() const { return static_cast<int>(eigenvalues.size()); }
  double eigenfunction(int p, double y) const;        ///< p is 1-based
  double eigenfunction_dy(int p, double y) const;
};

CrossSectionSpectrum interval_spectrum(double width, int modes);
CrossSectionSpectrum interval_spectrum(const OutletSpec& outlet, int modes);

struct ThresholdInfo {
  double lambda = 0.0;                 ///< lambda_dagger
  int count = 0;                       ///< number of threshold outlets
  std::vector<bool> is_threshold;      ///< per outlet
  std::vector<int> order;              ///< threshold outlets first, then by Lambda_1
  std::vector<std::vector<std::complex<double>>> kappa;  ///< kappa[n][p-1]; -i on threshold modes
  double spectral_gap = 0.0;           ///< min_n Lambda_2^n - lambda_dagger

  std::vector<int> threshold_outlets() const;
  /// |kappa_p^n|, the symbol of the symmetrized operator.
  double kappa_modulus(int n, int p) const { return std::abs(kappa[static_cast<std::size_t>(n)][static_cast<std::size_t>(p - 1)]); }
};

ThresholdInfo threshold(const std::vector<CrossSectionSpectrum>& spectra);

std::vector<CrossSectionSpectrum> outlet_spectra(const JunctionGeometry& geom, int modes);

}  // namespace wgt
