#include "wgt/modal.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "wgt/error.hpp"

namespace wgt {

double hat_sine_integral(double a, double b, double k, bool rising) {
  const double len = b - a;
  if (k * len < 0.05) {
    // closed form cancels badly here; 20-point Gauss is exact to rounding
    auto f = [&](double y) { return (rising ? (y - a) : (b - y)) / len * std::sin(k * y); };
    return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
  }
  const double dsin = std::sin(k * b) - std::sin(k * a);
  if (rising) return (dsin / (k * k) - len * std::cos(k * b) / k) / len;
  return (len * std::cos(k * a) / k - dsin / (k * k)) / len;
}

SparseMatrix ModalTraceMap::stacked() const {
  const int ndofs = per_outlet.empty() ? 0 : static_cast<int>(per_outlet.front().cols());
  std::vector<Eigen::Triplet<double>> trips;
  for (int n = 0; n < outlets(); ++n) {
    const auto& t = per_outlet[static_cast<std::size_t>(n)];
    for (int c = 0; c < t.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(t, c); it; ++it)
        trips.emplace_back(n * modes + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  }
  SparseMatrix s(channels(), ndofs);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::VectorXd ModalTraceMap::coefficients(int outlet, const Eigen::VectorXd& u) const {
  return per_outlet.at(static_cast<std::size_t>(outlet)) * u;
}

ModalTraceMap build_modal_maps(const Mesh& mesh, const DofMap& dofs, const std::vector<CrossSectionSpectrum>& spectra,
                               int modes) {
  ModalTraceMap map;
  map.modes = modes;
  for (std::size_t n = 0; n < spectra.size(); ++n) {
    const FaceDofs& f = dofs.face(static_cast<int>(n));
    int retained = 0;
    for (int d : f.dofs) retained += d >= 0 ? 1 : 0;
    if (modes > retained) {
      throw Error(ErrorCode::ModalOverresolution, "outlet " + std::to_string(n + 1) + " face has " +
                                                      std::to_string(retained) + " dofs for " +
                                                      std::to_string(modes) + " modes");
    }
    const double w = spectra[n].width;
    const double c = std::sqrt(2.0 / w);
    std::vector<Eigen::Triplet<double>> trips;
    for (int p = 1; p <= modes; ++p) {
      const double k = p * std::numbers::pi / w;
      for (std::size_t e = 0; e + 1 < f.vertices.size(); ++e) {
        const double a = f.y[e], b = f.y[e + 1];
        if (f.dofs[e] >= 0) trips.emplace_back(p - 1, f.dofs[e], c * hat_sine_integral(a, b, k, false));
        if (f.dofs[e + 1] >= 0) trips.emplace_back(p - 1, f.dofs[e + 1], c * hat_sine_integral(a, b, k, true));
      }
    }
    SparseMatrix t(modes, dofs.size());
    t.setFromTriplets(trips.begin(), trips.end());
    t.makeCompressed();
    map.per_outlet.push_back(std::move(t));
  }
  (void)mesh;
  return map;
}

}  // namespace wgt
