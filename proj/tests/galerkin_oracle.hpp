#pragma once

#include "lpctrl/mhd2d.hpp"

namespace lpctrl::testing {

/// Dense quadrature oracle for the channel model. Everything is computed by
/// direct Gauss-Legendre integration of the continuum expressions against
/// explicitly evaluated basis functions; no DST grids or closed-form
/// projection matrices are shared with the fast path.
class GalerkinOracle {
 public:
  explicit GalerkinOracle(const ChannelConfig& cfg, int nodes = 96);

  const ChannelConfig& config() const { return cfg_; }

  /// Value of the represented field at one point: band sine modes plus the
  /// background profile cos(y) weighted by the last coefficient.
  double value(const Vec& coeffs, double x, double y) const;
  double dx(const Vec& coeffs, double x, double y) const;
  double dy(const Vec& coeffs, double x, double y) const;

  /// 2D quadrature of an arbitrary integrand over the strip.
  double integrate(const std::function<double(double, double)>& f) const;

  /// L2 moments: <f, phi_mn> for every band mode and <f, cos y>.
  Vec project(const std::function<double(double, double)>& f) const;

  /// Quadrature projections of J(psi_u, omega_nu) and -J(psi_u, psi_v).
  Vec coad(const Vec& u, const Vec& nu) const;
  Vec ad(const Vec& u, const Vec& v) const;

  /// Diagonal multiplier of a scalar operator on basis direction i, computed
  /// by quadrature of op(phi_i) against phi_i.
  double multiplier(const std::function<double(int, double, double)>& op_of_mode,
                    int i) const;

  /// Laplacian and shaped-Laplacian multipliers from quadrature.
  Vec laplacian_multipliers() const;
  Vec shaped_laplacian_multipliers() const;

  /// Closed-loop field in the Z chart assembled from oracle pieces only.
  std::pair<Vec, Vec> closed_loop_field(const Vec& nu, const Vec& beta) const;

  int dim() const { return cfg_.extended_dim(); }
  int index(int m, int n) const { return (m - 1) * cfg_.Ny + (n - 1); }
  int chi_index() const { return cfg_.band_size(); }

 private:
  double basis(int i, double x, double y) const;
  double basis_dx(int i, double x, double y) const;
  double basis_dy(int i, double x, double y) const;
  double basis_lap(int i, double x, double y, double gamma) const;
  void dealias_zero(Vec& v) const;

  ChannelConfig cfg_;
  std::vector<double> gx_, gwx_, gy_, gwy_;  // nodes and weights per axis
};

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace lpctrl::testing
