#include "lpctrl/gains.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>

namespace lpctrl {

namespace {

constexpr double kSymTol = 1e-10;
constexpr double kEigTol = 1e-12;
constexpr double kBulletTol = 1e-10;

/// Positivity of a map d -> d* (or g -> g*) as a bilinear form, honoring the
/// descriptor pairing. Dense maps on coefficient-pairing algebras use the
/// symmetrized eigenvalues; diagonal maps use per-mode pairing signs.
std::pair<double, double> form_certificate(const AlgebraDescriptor& alg,
                                           const LinearMap& m) {
  if (m.is_diagonal() && !alg.coefficient_pairing()) {
    double mineig = std::numeric_limits<double>::infinity();
    Vec d = m.diagonal_entries();
    for (int i = 0; i < alg.dim(); ++i)
      mineig = std::min(mineig, d(i) * alg.pairing_weight(i));
    return {0.0, mineig};
  }
  return {m.symmetry_residual(), m.min_symmetric_eigenvalue()};
}

}  // namespace

double operator_norm(const LinearMap& m) {
  if (m.is_diagonal()) return m.diagonal_entries().cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Mat> svd(m.matrix());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

GainSet GainSet::identity(const KaluzaKlein& kk, int s, Orientation sign) {
  GainSet g;
  g.C = LinearMap::zero(Space::DStar, Space::GStar, kk.dim_g(), kk.dim_d());
  g.G = LinearMap::identity(Space::GStar, Space::GStar, kk.dim_g());
  g.s = s;
  g.sign = sign;
  return g;
}

ControlledMetric controlled_metric(const KaluzaKlein& kk, const LinearMap& C) {
  if (C.rows() != kk.dim_g() || C.cols() != kk.dim_d())
    throw DimensionError("controlled_metric: C must be dim(g) x dim(d)");
  LinearMap one = LinearMap::identity(Space::DStar, Space::DStar, kk.dim_d());
  LinearMap factor = one.add(kk.A0_adj().compose(C));  // 1 + A0* C on d*
  LinearMap muC = factor.inverse().compose(kk.mu0());

  ControlledMetric out;
  out.muC = muC;
  auto [symres, mineig] = form_certificate(*kk.d(), muC);
  out.symmetry_residual = symres;
  out.min_eigenvalue = mineig;
  out.admissible = symres <= kSymTol && mineig > kEigTol;
  out.muC.declared_symmetric = out.admissible;
  out.muC.declared_positive_definite = out.admissible;
  return out;
}

MatchOutcome match_structure(const KaluzaKlein& kk, const GainSet& gains) {
  MatchOutcome out;
  ControlledMetric cm = controlled_metric(kk, gains.C);
  if (!cm.admissible) {
    out.violated_bullet = "mu_C inner product";
    out.residual = std::min(cm.min_eigenvalue, kSymTol - cm.symmetry_residual);
    return out;
  }
  const LinearMap& muC = cm.muC;
  LinearMap AC = kk.A0().add(kk.I0().inverse().compose(gains.C).compose(muC));
  LinearMap AC_adj = AC.adjoint();

  // A0* G = mu0 mu_C^-1 A_C*
  LinearMap lhs = kk.A0_adj().compose(gains.G);
  LinearMap rhs = kk.mu0().compose(muC.inverse()).compose(AC_adj);
  double gres = operator_norm(lhs.subtract(rhs));
  if (gres >= kBulletTol) {
    out.violated_bullet = "A0* G = mu0 mu_C^-1 A_C*";
    out.residual = gres;
    return out;
  }

  LinearMap GmCAC = gains.G.subtract(gains.C.compose(AC_adj));
  LinearMap IC;
  try {
    IC = GmCAC.inverse().compose(kk.I0());
  } catch (const NotInvertibleError&) {
    out.violated_bullet = "G - C A_C* invertible";
    return out;
  }
  auto [symres, mineig] = form_certificate(*kk.g(), IC);
  if (symres > kSymTol || mineig <= kEigTol) {
    out.violated_bullet = "I_C inner product";
    out.residual = mineig;
    return out;
  }

  out.ok = true;
  out.structure = MatchedStructure{muC, IC, AC};
  out.structure.muC.declared_positive_definite = true;
  out.structure.IC.declared_positive_definite = true;
  return out;
}

GainSet gain_from_structure(const KaluzaKlein& kk, const MatchedStructure& ms,
                            int s, Orientation sign) {
  GainSet g;
  g.C = kk.I0().compose(ms.AC.subtract(kk.A0())).compose(ms.muC.inverse());
  g.G = kk.I0().compose(ms.IC.inverse()).add(g.C.compose(ms.AC.adjoint()));
  g.s = s;
  g.sign = sign;
  return g;
}

std::pair<double, double> check_lp_conditions(const KaluzaKlein& kk,
                                              const MatchedStructure& ms) {
  LinearMap lp1 = ms.IC.compose(ms.AC).subtract(kk.I0().compose(kk.A0()));
  LinearMap left = ms.muC.add(
      ms.AC.adjoint().compose(ms.IC).compose(ms.AC));
  LinearMap right = kk.mu0().add(
      kk.A0_adj().compose(kk.I0()).compose(kk.A0()));
  return {operator_norm(lp1), operator_norm(left.subtract(right))};
}

EPData ep_from_lp(const KaluzaKlein& kk, const MatchedStructure& ms) {
  EPData ep;
  ep.tau = ms.AC.subtract(kk.A0());
  ep.rho = ms.IC;
  LinearMap sigma_inv = kk.I0().inverse().subtract(ms.IC.inverse());
  ep.sigma = sigma_inv.inverse();  // throws when singular
  return ep;
}

MatchedStructure lp_from_ep(const KaluzaKlein& kk, const EPData& ep) {
  MatchedStructure ms;
  ms.IC = ep.rho;
  ms.AC = kk.A0().add(ep.tau);
  ms.muC = kk.mu0().add(ep.tau.adjoint().compose(ep.sigma).compose(ep.tau));
  return ms;
}

EPResiduals ep_residuals(const KaluzaKlein& kk, const MatchedStructure& ms,
                         const EPData& ep) {
  EPResiduals r;
  LinearMap I0A0 = kk.I0().compose(kk.A0());
  r.first = operator_norm(ep.tau.add(ep.sigma.inverse().compose(I0A0)));
  r.second = operator_norm(
      ep.sigma.inverse().add(ep.rho.inverse()).subtract(kk.I0().inverse()));
  r.metric = operator_norm(ms.muC.subtract(
      kk.mu0().add(ep.tau.adjoint().compose(ep.sigma).compose(ep.tau))));
  return r;
}

}  // namespace lpctrl
