#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "wgt/cross_section.hpp"
#include "wgt/fem.hpp"

namespace wgt {

/// Maps FEM dofs on each node face to cross-section Fourier coefficients
/// a_p^n = int_{omega_n} u Phi_p^n dy. The transpose lifts modal data to face
/// load vectors.
struct ModalTraceMap {
  int modes = 0;
  std::vector<SparseMatrix> per_outlet;  ///< modes x ndofs, one per outlet

  int outlets() const { return static_cast<int>(per_outlet.size()); }
  int channels() const { return modes * outlets(); }
  int channel(int outlet, int p) const { return outlet * modes + (p - 1); }
  /// Stacked (outlets*modes) x ndofs map.
  SparseMatrix stacked() const;
  Eigen::VectorXd coefficients(int outlet, const Eigen::VectorXd& u) const;
};

ModalTraceMap build_modal_maps(const Mesh& mesh, const DofMap& dofs,
                               const std::vector<CrossSectionSpectrum>& spectra, int modes);

/// int_a^b hat(y) sin(k y) dy for the hats rising (`rising`) or falling on [a,b].
double hat_sine_integral(double a, double b, double k, bool rising);

}  // namespace wgt
