#pragma once

#include <complex>
#include <vector>

namespace wgt {

using Complex = std::complex<double>;

/// Quintic smoothstep: 0 for t <= 0, 1 for t >= 1.
double cutoff(double t);
double cutoff_derivative(double t);

/// One cross-section mode of an outlet field:
/// [chi(z)] * (linear0 + linear1 z + decay exp(-kappa z)) Phi_p(y).
struct ModeTerm {
  int p = 1;
  Complex linear0{0.0, 0.0};
  Complex linear1{0.0, 0.0};
  Complex decay{0.0, 0.0};
  double kappa = 0.0;
  bool with_cutoff = false;
};

/// Closed-form field in the local coordinates (y, z) of one outlet of width w.
struct OutletField {
  double width = 1.0;
  std::vector<ModeTerm> terms;

  Complex value(double y, double z) const;
  Complex dz(double y, double z) const;
  OutletField& operator+=(const OutletField& other);
};

OutletField operator*(Complex c, OutletField f);
OutletField operator+(OutletField a, const OutletField& b);

enum class WaveKind { In, Out };

/// Threshold wave on outlet `outlet`; phase rotates in/out waves by
/// exp(+i phase) / exp(-i phase) so the in/out pair stays conjugate.
struct ThresholdWave {
  int outlet = 0;
  WaveKind kind = WaveKind::In;
  double phase = 0.0;
  double width = 1.0;

  OutletField field() const;
};

Complex wave_eval(const ThresholdWave& wave, double y, double z);

/// q(u, v) = int (conj(v) dz u - u conj(dz v)) dy at z = R, by composite
/// Gauss-Legendre quadrature. Requires R > 1, past the cutoff transition.
Complex q_form(const OutletField& u, const OutletField& v, double R);
Complex q_form(const ThresholdWave& u, const ThresholdWave& v, double R);

}  // namespace wgt
