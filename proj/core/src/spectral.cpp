#include "lpctrl/spectral.hpp"

#include <cmath>

namespace lpctrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// int_0^{L pi} sin(m x / L) dx
double sine_mean(double L, int m) {
  return (m % 2 == 1) ? 2.0 * L / m : 0.0;
}

// int_0^{W pi} cos(y) sin(n y / W) dy, W a positive integer
double cos_cross(int W, int n) {
  if (n == W) return 0.0;
  double par = ((n + W) % 2 == 0) ? 1.0 : -1.0;
  return static_cast<double>(W) * n * (1.0 - par) /
         (static_cast<double>(n) * n - static_cast<double>(W) * W);
}

// int_0^pi sin(W t) cos(k t) dt, W a positive integer, k >= 0
double sin_cos_integral(int W, int k) {
  if (k == W) return 0.0;
  double par = ((W + k) % 2 == 0) ? 1.0 : -1.0;
  return W * (1.0 - par) /
         (static_cast<double>(W) * W - static_cast<double>(k) * k);
}

// int_0^pi cos(p t) sin(m t) dt
double cos_sin_integral(int m, int p) {
  if (m == p) return 0.0;
  double par = ((m + p) % 2 == 0) ? 1.0 : -1.0;
  return m * (1.0 - par) /
         (static_cast<double>(m) * m - static_cast<double>(p) * p);
}

}  // namespace

void ChannelConfig::validate() const {
  if (L <= 0.0 || W <= 0.0) throw Error("ChannelConfig: L, W must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw Error("ChannelConfig: gamma must satisfy 0 <= gamma < 1");
  if (e <= 0.0) throw Error("ChannelConfig: charge constant must be > 0");
  if (Nx < 4 || Ny < 4) throw Error("ChannelConfig: Nx, Ny must be >= 4");
  if (std::abs(W - std::lround(W)) > 1e-12 || std::lround(W) < 1)
    throw Error("ChannelConfig: W must be a positive integer so the shear "
                "profile vanishes on both walls");
}

SpectralWorkspace::SpectralWorkspace(ChannelConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  const int Nx = cfg_.Nx, Ny = cfg_.Ny;
  const double L = cfg_.L, W = cfg_.W;
  const int iW = static_cast<int>(std::lround(W));
  Kx_ = 2 * Nx + 3;
  Ky_ = 2 * Ny + 3;
  cell_ = (L * kPi / 2.0) * (W * kPi / 2.0);
  g2_ = L * kPi * W * kPi / 2.0;

  lap_ = Vec(dim());
  lap_gamma_ = Vec(dim());
  for (int m = 1; m <= Nx; ++m) {
    for (int n = 1; n <= Ny; ++n) {
      double kx2 = (m / L) * (m / L);
      double ky2 = (n / W) * (n / W);
      lap_(index(m, n)) = -(kx2 + ky2);
      lap_gamma_(index(m, n)) = -(kx2 + (1.0 - cfg_.gamma) * ky2);
    }
  }
  lap_(chi_index()) = -1.0;
  lap_gamma_(chi_index()) = -(1.0 - cfg_.gamma);

  weights_ = Vec::Constant(dim(), -cell_);
  weights_(chi_index()) = -g2_;

  auto grid_x = [&](int i) { return i * kPi / (Kx_ + 1); };  // x_i / L
  auto grid_y = [&](int j) { return j * kPi / (Ky_ + 1); };  // y_j / W

  SxV_ = Mat(Kx_, Nx);
  SxD_ = Mat(Kx_, Nx);
  for (int i = 1; i <= Kx_; ++i)
    for (int m = 1; m <= Nx; ++m) {
      SxV_(i - 1, m - 1) = std::sin(m * grid_x(i));
      SxD_(i - 1, m - 1) = (m / L) * std::cos(m * grid_x(i));
    }
  SyV_ = Mat(Ky_, Ny);
  SyD_ = Mat(Ky_, Ny);
  for (int j = 1; j <= Ky_; ++j)
    for (int n = 1; n <= Ny; ++n) {
      SyV_(j - 1, n - 1) = std::sin(n * grid_y(j));
      SyD_(j - 1, n - 1) = (n / W) * std::cos(n * grid_y(j));
    }
  PxB_ = (2.0 / (Kx_ + 1)) * SxV_.transpose();
  PyB_ = (2.0 / (Ky_ + 1)) * SyV_.transpose();

  // Background-moment grid weights: exact quadrature of <., cos y> for
  // sine polynomials resolvable on the padded grid.
  wx_ = Vec::Zero(Kx_);
  for (int i = 1; i <= Kx_; ++i)
    for (int p = 1; p <= Kx_; ++p)
      wx_(i - 1) += (2.0 / (Kx_ + 1)) * std::sin(p * grid_x(i)) * sine_mean(L, p);
  wy_ = Vec::Zero(Ky_);
  for (int j = 1; j <= Ky_; ++j)
    for (int q = 1; q <= Ky_; ++q)
      wy_(j - 1) += (2.0 / (Ky_ + 1)) * std::sin(q * grid_y(j)) * cos_cross(iW, q);

  // Closed-form projections of sin(y) d/dx acting on a band field.
  BX_ = Mat::Zero(Nx, Nx);
  for (int m = 1; m <= Nx; ++m)
    for (int p = 1; p <= Nx; ++p)
      BX_(m - 1, p - 1) = (2.0 * p / (L * kPi)) * cos_sin_integral(m, p);
  BY_ = Mat::Zero(Ny, Ny);
  for (int n = 1; n <= Ny; ++n)
    for (int q = 1; q <= Ny; ++q)
      BY_(n - 1, q - 1) =
          (1.0 / kPi) * (sin_cos_integral(iW, std::abs(q - n)) -
                         sin_cos_integral(iW, q + n));
}

double SpectralWorkspace::pairing(const Vec& nu, const Vec& u) const {
  return (weights_.array() * nu.array() * u.array()).sum();
}

void SpectralWorkspace::apply_dealias(Vec& v) const {
  if (!cfg_.dealias) return;
  const int mx = cfg_.keep_x(), my = cfg_.keep_y();
  for (int m = 1; m <= cfg_.Nx; ++m)
    for (int n = 1; n <= cfg_.Ny; ++n)
      if (m > mx || n > my) v(index(m, n)) = 0.0;
}

Vec SpectralWorkspace::jacobian_projection(const Vec& u, const Vec& f) const {
  const int Nx = cfg_.Nx, Ny = cfg_.Ny;
  Eigen::Map<const Mat> Fu(u.data(), Ny, Nx);  // column-major: (n-1, m-1)
  Eigen::Map<const Mat> Ff(f.data(), Ny, Nx);
  // Band evaluation on the padded grid. Coefficients are stored with the y
  // mode contiguous, so the natural product order is S_y * F * S_x^T.
  Mat psi_x = SyV_ * Fu * SxD_.transpose();  // Ky x Kx
  Mat psi_y = SyD_ * Fu * SxV_.transpose();
  Mat f_x = SyV_ * Ff * SxD_.transpose();
  Mat f_y = SyD_ * Ff * SxV_.transpose();
  Mat J = psi_x.cwiseProduct(f_y) - psi_y.cwiseProduct(f_x);  // Ky x Kx

  Vec out = Vec::Zero(dim());
  Mat band = PyB_ * J * PxB_.transpose();  // Ny x Nx
  // Analytic background interactions, projected in closed form. The
  // background self-interaction vanishes identically (both profiles depend
  // on y only).
  const double a = u(chi_index());
  const double b = f(chi_index());
  if (a != 0.0) band += a * (BY_ * Ff * BX_.transpose());
  if (b != 0.0) band -= b * (BY_ * Fu * BX_.transpose());
  Eigen::Map<Mat>(out.data(), Ny, Nx) = band;
  out(chi_index()) = wy_.dot(J * wx_) / g2_;
  apply_dealias(out);
  return out;
}

Vec SpectralWorkspace::coad(const Vec& u, const Vec& nu) const {
  return jacobian_projection(u, nu);
}

Vec SpectralWorkspace::ad(const Vec& u, const Vec& v) const {
  return -jacobian_projection(u, v);
}

double SpectralWorkspace::enstrophy(const Vec& omega) const {
  double band = omega.head(cfg_.band_size()).squaredNorm();
  double chi = omega(chi_index());
  return cell_ * band + g2_ * chi * chi;
}

double SpectralWorkspace::mean_vorticity(const Vec& omega) const {
  const double L = cfg_.L;
  const int iW = static_cast<int>(std::lround(cfg_.W));
  double total = 0.0;
  for (int m = 1; m <= cfg_.Nx; m += 2)
    for (int n = 1; n <= cfg_.Ny; n += 2)
      total += omega(index(m, n)) * sine_mean(L, m) * (2.0 * iW / n);
  return total;
}

Mat SpectralWorkspace::values_on_grid(const Vec& coeffs, int nx, int ny) const {
  const int Nx = cfg_.Nx, Ny = cfg_.Ny;
  Mat V = Mat::Zero(nx, ny);
  Eigen::Map<const Mat> F(coeffs.data(), Ny, Nx);
  Mat Sx(nx, Nx), Sy(ny, Ny);
  for (int i = 1; i <= nx; ++i)
    for (int m = 1; m <= Nx; ++m)
      Sx(i - 1, m - 1) = std::sin(m * i * kPi / (nx + 1));
  for (int j = 1; j <= ny; ++j)
    for (int n = 1; n <= Ny; ++n)
      Sy(j - 1, n - 1) = std::sin(n * j * kPi / (ny + 1));
  V = Sx * F.transpose() * Sy.transpose();
  const double chi = coeffs(chi_index());
  if (chi != 0.0) {
    for (int j = 1; j <= ny; ++j) {
      double cy = std::cos(cfg_.W * j * kPi / (ny + 1));
      V.col(j - 1).array() += chi * cy;
    }
  }
  return V;
}

double SpectralWorkspace::sup_norm_on_grid(const Vec& coeffs) const {
  return values_on_grid(coeffs, Kx_, Ky_).cwiseAbs().maxCoeff();
}

Vec SpectralWorkspace::extend(const SpectralField& band, double chi) const {
  if (band.coeffs.rows() != cfg_.Nx || band.coeffs.cols() != cfg_.Ny)
    throw DimensionError("SpectralWorkspace: band field shape");
  Vec v = Vec::Zero(dim());
  for (int m = 1; m <= cfg_.Nx; ++m)
    for (int n = 1; n <= cfg_.Ny; ++n)
      v(index(m, n)) = band.coeffs(m - 1, n - 1);
  v(chi_index()) = chi;
  return v;
}

SpectralField SpectralWorkspace::band_part(const Vec& v) const {
  Mat band(cfg_.Nx, cfg_.Ny);
  for (int m = 1; m <= cfg_.Nx; ++m)
    for (int n = 1; n <= cfg_.Ny; ++n)
      band(m - 1, n - 1) = v(index(m, n));
  return SpectralField(band);
}

AlgebraPtr SpectralWorkspace::make_descriptor(
    std::shared_ptr<const SpectralWorkspace> ws) {
  const double cell = ws->cell();
  std::vector<Casimir> casimirs;
  casimirs.push_back(Casimir{
      "enstrophy",
      [ws](const Vec& nu) { return ws->enstrophy(nu); },
      [](const Vec& nu) { return Vec(-2.0 * nu); }});
  casimirs.push_back(Casimir{
      "mean_vorticity",
      [ws](const Vec& nu) { return ws->mean_vorticity(nu); },
      [ws, cell](const Vec& nu) {
        // gradient of the linear functional w.r.t. the weighted pairing
        Vec g = Vec::Zero(nu.size());
        const ChannelConfig& cfg = ws->config();
        const int iW = static_cast<int>(std::lround(cfg.W));
        for (int m = 1; m <= cfg.Nx; m += 2)
          for (int n = 1; n <= cfg.Ny; n += 2)
            g(ws->index(m, n)) = -sine_mean(cfg.L, m) * (2.0 * iW / n) / cell;
        return g;
      }});
  return AlgebraDescriptor::from_callables(
      ws->dim(), "mhd2d-channel",
      [ws](const Vec& u, const Vec& v) { return ws->ad(u, v); },
      [ws](const Vec& u, const Vec& nu) { return ws->coad(u, nu); },
      [ws](const Vec& nu, const Vec& u) { return ws->pairing(nu, u); },
      ws->pairing_weights(), /*exact_jacobi=*/false, std::move(casimirs));
}

}  // namespace lpctrl
