#include "wgt/waves.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "wgt/error.hpp"

namespace wgt {

double cutoff(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

namespace {

double mode(int p, double w, double y) { return std::sqrt(2.0 / w) * std::sin(p * std::numbers::pi * y / w); }

}  // namespace

Complex OutletField::value(double y, double z) const {
  Complex s{0.0, 0.0};
  for (const auto& t : terms) {
    Complex a = t.linear0 + t.linear1 * z + t.decay * std::exp(-t.kappa * z);
    if (t.with_cutoff) a *= cutoff(z);
    s += a * mode(t.p, width, y);
  }
  return s;
}

Complex OutletField::dz(double y, double z) const {
  Complex s{0.0, 0.0};
  for (const auto& t : terms) {
    const Complex a = t.linear0 + t.linear1 * z + t.decay * std::exp(-t.kappa * z);
    Complex da = t.linear1 - t.kappa * t.decay * std::exp(-t.kappa * z);
    if (t.with_cutoff) da = da * cutoff(z) + a * cutoff_derivative(z);
    s += da * mode(t.p, width, y);
  }
  return s;
}

OutletField& OutletField::operator+=(const OutletField& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

OutletField operator*(Complex c, OutletField f) {
  for (auto& t : f.terms) {
    t.linear0 *= c;
    t.linear1 *= c;
    t.decay *= c;
  }
  return f;
}

OutletField operator+(OutletField a, const OutletField& b) {
  a += b;
  return a;
}

OutletField ThresholdWave::field() const {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  ModeTerm t;
  t.p = 1;
  t.with_cutoff = true;
  if (kind == WaveKind::In) {
    const Complex rot = std::exp(i * phase);
    t.linear0 = rot * r * i;
    t.linear1 = rot * r;
  } else {
    const Complex rot = std::exp(-i * phase);
    t.linear0 = -rot * r * i;
    t.linear1 = rot * r;
  }
  return OutletField{width, {t}};
}

Complex wave_eval(const ThresholdWave& wave, double y, double z) { return wave.field().value(y, z); }

Complex q_form(const OutletField& u, const OutletField& v, double R) {
  if (!(R > 1.0)) throw Error(ErrorCode::RInsideCutoff, "q-form needs R > 1, got " + std::to_string(R));
  constexpr int panels = 16;
  const double w = u.width;
  Complex total{0.0, 0.0};
  for (int k = 0; k < panels; ++k) {
    const double a = w * k / panels, b = w * (k + 1) / panels;
    auto re = [&](double y) {
      return std::real(std::conj(v.value(y, R)) * u.dz(y, R) - u.value(y, R) * std::conj(v.dz(y, R)));
    };
    auto im = [&](double y) {
      return std::imag(std::conj(v.value(y, R)) * u.dz(y, R) - u.value(y, R) * std::conj(v.dz(y, R)));
    };
    using quad = boost::math::quadrature::gauss<double, 20>;
    total += Complex{quad::integrate(re, a, b), quad::integrate(im, a, b)};
  }
  return total;
}

Complex q_form(const ThresholdWave& u, const ThresholdWave& v, double R) {
  if (u.outlet != v.outlet) return {0.0, 0.0};
  return q_form(u.field(), v.field(), R);
}

}  // namespace wgt
