#include "lpctrl/kaluza.hpp"

namespace lpctrl {

KaluzaKlein::KaluzaKlein(AlgebraPtr d, AlgebraPtr g, LinearMap mu0,
                         LinearMap I0, LinearMap A0)
    : d_(std::move(d)),
      g_(std::move(g)),
      mu0_(std::move(mu0)),
      I0_(std::move(I0)),
      A0_(std::move(A0)),
      A0_adj_(A0_.adjoint()) {
  if (mu0_.rows() != d_->dim() || mu0_.cols() != d_->dim())
    throw DimensionError("KaluzaKlein: mu0 must be dim(d) x dim(d)");
  if (I0_.rows() != g_->dim() || I0_.cols() != g_->dim())
    throw DimensionError("KaluzaKlein: I0 must be dim(g) x dim(g)");
  if (A0_.rows() != g_->dim() || A0_.cols() != d_->dim())
    throw DimensionError("KaluzaKlein: A0 must be dim(g) x dim(d)");
}

std::pair<Vec, Vec> KaluzaKlein::metric_apply(const Vec& u, const Vec& X) const {
  d_->require_element(u, "metric_apply u");
  g_->require_element(X, "metric_apply X");
  Vec fiber = I0_.apply(A0_.apply(u)) + I0_.apply(X);
  Vec nu = mu0_.apply(u) + A0_adj_.apply(fiber);
  return {nu, fiber};
}

std::pair<Vec, Vec> KaluzaKlein::metric_solve(const Vec& nu, const Vec& alpha) const {
  d_->require_element(nu, "metric_solve nu");
  g_->require_element(alpha, "metric_solve alpha");
  Vec u = mu0_.solve(nu - A0_adj_.apply(alpha));
  Vec X = I0_.solve(alpha) - A0_.apply(u);
  return {u, X};
}

double KaluzaKlein::h0(const Vec& nu, const Vec& alpha) const {
  auto [u, X] = metric_solve(nu, alpha);
  return 0.5 * (d_->pairing(nu, u) + g_->pairing(alpha, X));
}

std::pair<Vec, Vec> KaluzaKlein::free_field(Orientation sign, const Vec& nu,
                                            const Vec& alpha) const {
  auto [u, X] = metric_solve(nu, alpha);
  double s = sign_of(sign);
  return {s * d_->coad(u, nu), s * g_->coad(X, alpha)};
}

Mat KaluzaKlein::block_matrix() const {
  const int nd = dim_d();
  const int ng = dim_g();
  Mat m(nd + ng, nd + ng);
  Mat A0m = A0_.matrix();
  Mat I0m = I0_.matrix();
  m.topLeftCorner(nd, nd) = mu0_.matrix() + A0m.transpose() * I0m * A0m;
  m.topRightCorner(nd, ng) = A0m.transpose() * I0m;
  m.bottomLeftCorner(ng, nd) = I0m * A0m;
  m.bottomRightCorner(ng, ng) = I0m;
  return m;
}

Mat KaluzaKlein::block_inverse_matrix() const {
  const int nd = dim_d();
  const int ng = dim_g();
  Mat m(nd + ng, nd + ng);
  Mat A0m = A0_.matrix();
  Mat mu0i = mu0_.inverse().matrix();
  Mat I0i = I0_.inverse().matrix();
  m.topLeftCorner(nd, nd) = mu0i;
  m.topRightCorner(nd, ng) = -mu0i * A0m.transpose();
  m.bottomLeftCorner(ng, nd) = -A0m * mu0i;
  m.bottomRightCorner(ng, ng) = I0i + A0m * mu0i * A0m.transpose();
  return m;
}

std::pair<Vec, Vec> metric_apply(const KaluzaKlein& kk, const Vec& u,
                                 const Vec& X) {
  return kk.metric_apply(u, X);
}

std::pair<Vec, Vec> metric_solve(const KaluzaKlein& kk, const Vec& nu,
                                 const Vec& alpha) {
  return kk.metric_solve(nu, alpha);
}

double h0_eval(const KaluzaKlein& kk, const Vec& nu, const Vec& alpha) {
  return kk.h0(nu, alpha);
}

std::pair<Vec, Vec> free_lp_field(const KaluzaKlein& kk, Orientation sign,
                                  const Vec& nu, const Vec& alpha) {
  return kk.free_field(sign, nu, alpha);
}

}  // namespace lpctrl
