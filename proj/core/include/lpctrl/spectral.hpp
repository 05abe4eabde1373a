#pragma once

#include "lpctrl/algebra.hpp"

namespace lpctrl {

/// Channel geometry and truncation for the planar flow model on the strip
/// [0, L pi] x [0, W pi]. W must be a positive integer so the shear profile
/// sin(y) vanishes at both horizontal walls.
struct ChannelConfig {
  double L = 2.0;
  double W = 2.0;
  double gamma = 0.8;   // metric shaping, 0 <= gamma < 1
  double e = 1.0;       // charge constant
  int Nx = 24;
  int Ny = 24;
  bool dealias = true;  // 2/3 rule on the retained band

  void validate() const;
  int band_size() const { return Nx * Ny; }
  int extended_dim() const { return Nx * Ny + 1; }  // band + background slot
  int keep_x() const { return dealias ? (2 * Nx) / 3 : Nx; }
  int keep_y() const { return dealias ? (2 * Ny) / 3 : Ny; }
};

/// Scalar field as Nx x Ny sine-sine coefficients, vanishing on the walls.
/// Row index is the x mode (1-based mode m at row m-1).
struct SpectralField {
  Mat coeffs;

  SpectralField() = default;
  explicit SpectralField(Mat c) : coeffs(std::move(c)) {}
  static SpectralField zero(const ChannelConfig& cfg) {
    return SpectralField(Mat::Zero(cfg.Nx, cfg.Ny));
  }
  bool finite() const { return coeffs.allFinite(); }
};

/// Discrete model space for the channel: the double-sine band enriched by the
/// analytic background direction chi = cos(y) (stream representative of the
/// shear profile; also its vorticity representative, since Delta chi = -chi).
///
/// Elements of the algebra are stream-function coefficients, elements of the
/// dual are vorticity coefficients, both of length Nx*Ny + 1 with the
/// background coefficient last. The pairing is the weighted coefficient sum
///   <nu, u> = -cell * sum_band nu u - G2 * nu_chi u_chi,
/// the L2 integral -int psi_u omega_nu with the band/background cross moments
/// dropped (declared-orthogonal basis). Under this pairing the coadjoint
/// below is the exact dual of the bracket, every diagonal operator is exactly
/// self-adjoint, and the per-mode enstrophy is an exact Casimir of the
/// advective terms; those three identities pin the scalar form of the model.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(ChannelConfig cfg);

  const ChannelConfig& config() const { return cfg_; }
  int dim() const { return cfg_.extended_dim(); }
  int index(int m, int n) const { return (m - 1) * cfg_.Ny + (n - 1); }
  int chi_index() const { return cfg_.band_size(); }

  double cell() const { return cell_; }              // int phi_mn^2
  double background_norm_sq() const { return g2_; }  // int cos(y)^2

  /// -(m^2/L^2 + n^2/W^2) per band mode; -1 on the background slot.
  const Vec& laplacian_multipliers() const { return lap_; }
  /// -(m^2/L^2 + (1-gamma) n^2/W^2); -(1-gamma) on the background slot.
  const Vec& shaped_laplacian_multipliers() const { return lap_gamma_; }

  /// Pairing weights <e_i^*, e_i> of the declared-orthogonal basis.
  const Vec& pairing_weights() const { return weights_; }
  double pairing(const Vec& nu, const Vec& u) const;

  /// Projection of the advection J(psi_u, omega_nu) onto the model space:
  /// exact band sine coefficients plus the exact background moment
  /// <J, cos y>/G2. Band x background products are evaluated through the
  /// analytic background (closed-form separable projections); the background
  /// self-interaction vanishes identically. Honors the dealias rule.
  Vec coad(const Vec& u, const Vec& nu) const;

  /// ad(u, v) = -Proj[J(psi_u, psi_v)]; the exact pairing-dual of coad.
  Vec ad(const Vec& u, const Vec& v) const;

  /// Exact quadratic enstrophy of the model, sum of band and background
  /// contributions (conserved exactly by every coadjoint term).
  double enstrophy(const Vec& omega) const;
  /// int omega dx dy of the band part (the background has zero mean).
  double mean_vorticity(const Vec& omega) const;

  /// Pointwise values of the represented scalar field on an nx x ny uniform
  /// interior grid (background included analytically).
  Mat values_on_grid(const Vec& coeffs, int nx, int ny) const;
  double sup_norm_on_grid(const Vec& coeffs) const;

  Vec extend(const SpectralField& band, double chi = 0.0) const;
  SpectralField band_part(const Vec& v) const;

  /// The shared algebra descriptor for both factors of the product algebra
  /// (the base and symmetry copies coincide as spaces).
  static AlgebraPtr make_descriptor(std::shared_ptr<const SpectralWorkspace> ws);

 private:
  Vec jacobian_projection(const Vec& u, const Vec& f) const;
  void apply_dealias(Vec& v) const;

  ChannelConfig cfg_;
  int Kx_ = 0, Ky_ = 0;
  double cell_ = 0.0, g2_ = 0.0;
  Vec lap_, lap_gamma_, weights_;
  // grid evaluation and exact projection matrices
  Mat SxV_, SxD_, SyV_, SyD_;  // value / derivative samplers, K x N
  Mat PxB_, PyB_;              // band projections, N x K
  Vec wx_, wy_;                // background-moment grid weights
  Mat BX_, BY_;                // analytic background-advection projections
};

}  // namespace lpctrl
