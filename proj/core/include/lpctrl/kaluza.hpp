#pragma once

#include "lpctrl/algebra.hpp"

namespace lpctrl {

/// +1 for the left (body) representation, -1 for the right (space) one.
/// Stored once per system; every signed formula reads it from here.
enum class Orientation : int { Left = +1, Right = -1 };

inline double sign_of(Orientation o) { return static_cast<double>(o); }

/// Kinetic-energy data of a Kaluza-Klein metric on d x g: a base metric
/// mu0: d -> d*, a fiber metric I0: g -> g* and a connection A0: d -> g.
/// The assembled block metric is
///   [ mu0 + A0* I0 A0   A0* I0 ]
///   [ I0 A0             I0     ]
/// and its inverse is applied through the closed-form legs
///   u = mu0^-1 (nu - A0* alpha),  X = I0^-1 alpha - A0 u.
class KaluzaKlein {
 public:
  KaluzaKlein(AlgebraPtr d, AlgebraPtr g, LinearMap mu0, LinearMap I0,
              LinearMap A0);

  const AlgebraPtr& d() const { return d_; }
  const AlgebraPtr& g() const { return g_; }
  const LinearMap& mu0() const { return mu0_; }
  const LinearMap& I0() const { return I0_; }
  const LinearMap& A0() const { return A0_; }
  const LinearMap& A0_adj() const { return A0_adj_; }

  int dim_d() const { return d_->dim(); }
  int dim_g() const { return g_->dim(); }

  /// Forward metric: (nu, alpha) = mu0^P (u, X), blockwise.
  std::pair<Vec, Vec> metric_apply(const Vec& u, const Vec& X) const;

  /// Inverse metric through the closed-form legs.
  std::pair<Vec, Vec> metric_solve(const Vec& nu, const Vec& alpha) const;

  /// h0(nu, alpha) = <(nu,alpha), (mu0^P)^-1 (nu,alpha)>/2.
  double h0(const Vec& nu, const Vec& alpha) const;

  /// Free Lie-Poisson field: nud = s ad(u)* nu, alphad = s ad(X)* alpha.
  std::pair<Vec, Vec> free_field(Orientation sign, const Vec& nu,
                                 const Vec& alpha) const;

  /// Assembled block matrix of the metric (dense systems only; tests).
  Mat block_matrix() const;
  /// Assembled block matrix of the inverse metric per the displayed form
  ///   [ mu0^-1            -mu0^-1 A0*            ]
  ///   [ -A0 mu0^-1         I0^-1 + A0 mu0^-1 A0* ]
  Mat block_inverse_matrix() const;

 private:
  AlgebraPtr d_;
  AlgebraPtr g_;
  LinearMap mu0_, I0_, A0_, A0_adj_;
};

/// [OP] metric_apply / metric_solve / h0_eval / free_lp_field as free
/// functions over the type above.
std::pair<Vec, Vec> metric_apply(const KaluzaKlein& kk, const Vec& u,
                                 const Vec& X);
std::pair<Vec, Vec> metric_solve(const KaluzaKlein& kk, const Vec& nu,
                                 const Vec& alpha);
double h0_eval(const KaluzaKlein& kk, const Vec& nu, const Vec& alpha);
std::pair<Vec, Vec> free_lp_field(const KaluzaKlein& kk, Orientation sign,
                                  const Vec& nu, const Vec& alpha);

}  // namespace lpctrl
