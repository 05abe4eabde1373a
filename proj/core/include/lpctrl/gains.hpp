#pragma once

#include "lpctrl/kaluza.hpp"

namespace lpctrl {

/// Control data: a shaping map C: d* -> g*, an invertible G: g* -> g*, the
/// dissipation sign s in {+1,-1} and the representation orientation.
struct GainSet {
  LinearMap C;
  LinearMap G;
  int s = +1;
  Orientation sign = Orientation::Left;

  static GainSet identity(const KaluzaKlein& kk, int s = +1,
                          Orientation sign = Orientation::Left);
};

/// The matched metric triple (mu_C, I_C, A_C).
struct MatchedStructure {
  LinearMap muC;  // d -> d*
  LinearMap IC;   // g -> g*
  LinearMap AC;   // d -> g
};

/// Local-coordinate data of the controlled-Lagrangian construction:
/// tau = A_C - A0, and symmetric invertible sigma, rho: g -> g*.
struct EPData {
  LinearMap tau;
  LinearMap sigma;
  LinearMap rho;
};

struct ControlledMetric {
  LinearMap muC;
  bool admissible = false;     // symmetric positive definite
  double symmetry_residual = 0.0;
  double min_eigenvalue = 0.0;
};

struct MatchOutcome {
  bool ok = false;
  MatchedStructure structure;
  std::string violated_bullet;  // empty on success
  double residual = 0.0;
};

/// mu_C = (1 + A0* C)^-1 mu0 with an admissibility certificate
/// (symmetry residual <= 1e-10, smallest eigenvalue > 1e-12).
/// Throws NotInvertibleError when 1 + A0* C is singular.
ControlledMetric controlled_metric(const KaluzaKlein& kk, const LinearMap& C);

/// Builds (mu_C, I_C, A_C) from admissible gains and verifies the matching
/// bullets: A0* G = mu0 mu_C^-1 A_C* and I_C = (G - C A_C*)^-1 I0 an inner
/// product. On failure the violated bullet is named.
MatchOutcome match_structure(const KaluzaKlein& kk, const GainSet& gains);

/// Recovers C = I0 (A_C - A0) mu_C^-1 and G = I0 I_C^-1 + C A_C*.
GainSet gain_from_structure(const KaluzaKlein& kk, const MatchedStructure& ms,
                            int s = +1, Orientation sign = Orientation::Left);

/// Operator-norm residuals of I_C A_C = I0 A0 and
/// mu_C + A_C* I_C A_C = mu0 + A0* I0 A0.
std::pair<double, double> check_lp_conditions(const KaluzaKlein& kk,
                                              const MatchedStructure& ms);

/// tau = A_C - A0, rho = I_C, sigma = (I0^-1 - rho^-1)^-1.
/// Throws NotInvertibleError when I0^-1 - rho^-1 is singular.
EPData ep_from_lp(const KaluzaKlein& kk, const MatchedStructure& ms);

/// I_C = rho, A_C = A0 + tau, mu_C = mu0 + tau* sigma tau.
MatchedStructure lp_from_ep(const KaluzaKlein& kk, const EPData& ep);

/// Residuals of the local matching conditions: tau + sigma^-1 I0 A0 (first),
/// sigma^-1 + rho^-1 - I0^-1 (second), and the metric-consistency defect
/// mu_C - mu0 - tau* sigma tau for the supplied structure (third).
struct EPResiduals {
  double first = 0.0;
  double second = 0.0;
  double metric = 0.0;
};
EPResiduals ep_residuals(const KaluzaKlein& kk, const MatchedStructure& ms,
                         const EPData& ep);

/// Largest singular value (max |entry| for diagonal storage).
double operator_norm(const LinearMap& m);

}  // namespace lpctrl
