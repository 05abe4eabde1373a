#pragma once

#include "lpctrl/gains.hpp"

namespace lpctrl {

/// Which chart a state lives in: X carries (nu, alpha), Z carries (nu, beta).
enum class Chart { X, Z };

struct State {
  DualElement nu;      // element of d*
  DualElement second;  // alpha or beta in g*, per chart
  Chart chart = Chart::X;
};

/// Observable on d* with a user-supplied gradient (no symbolic
/// differentiation); the gradient is an element of d.
struct Observable {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

/// Construction pathways. Matched follows the metric-matching route (no
/// dissipation, matching conditions enforced); DoubleBracket follows the
/// dissipative IDA route (admissible mu_C only). Mixing is rejected: the
/// dissipative operations throw in Matched mode and vice versa.
enum class ControlMode { Matched, DoubleBracket };

class ControlledSystem {
 public:
  static ControlledSystem matched(KaluzaKlein kk, GainSet gains);
  static ControlledSystem double_bracket(KaluzaKlein kk, GainSet gains);

  const KaluzaKlein& kk() const { return kk_; }
  const GainSet& gains() const { return gains_; }
  ControlMode mode() const { return mode_; }
  Orientation orientation() const { return gains_.sign; }
  double sgn() const { return sign_of(gains_.sign); }
  double s() const { return static_cast<double>(gains_.s); }
  const LinearMap& muC() const { return muC_; }
  const MatchedStructure& matched_structure() const;
  const AlgebraPtr& d() const { return kk_.d(); }
  const AlgebraPtr& g() const { return kk_.g(); }

  State make_state(Vec nu, Vec second, Chart chart) const;

  /// Nonlinear shaping term N(nu) = sign*s * I0 A0 mu0^-1 coad(muC^-1 nu, nu).
  Vec double_bracket_term(const Vec& nu) const;

  /// Directional derivative of the shaping term:
  /// dN(nu) eta = sign*s * I0 A0 mu0^-1 (coad(muC^-1 eta, nu) + coad(muC^-1 nu, eta)).
  Vec double_bracket_term_directional(const Vec& nu, const Vec& eta) const;

  /// Force in the Lie-Poisson chart (independent of any group point):
  /// sign*( G coad(X, G^-1(C nu + N + alpha)) - C coad(u,nu)
  ///        - dN(nu) coad(u,nu) - coad(X, alpha) ).
  Vec lp_control_force(const Vec& nu, const Vec& alpha) const;

  /// Dissipative force -sign*coad(dh0/dalpha, beta) - beta - G^-1 N(nu),
  /// with dh0/dalpha evaluated at alpha = G beta - C nu - N(nu).
  Vec dissipative_force(const Vec& nu, const Vec& beta) const;

  /// Chart change beta = G^-1(alpha + C nu + N(nu)) and its inverse.
  Vec phi_forward(const Vec& nu, const Vec& alpha) const;
  Vec phi_inverse(const Vec& nu, const Vec& beta) const;
  State to_chart(const State& st, Chart target) const;

  /// Tangent of the chart change: (nud, alphad) -> (nud, G^-1(alphad + C nud + dN(nu) nud)).
  std::pair<Vec, Vec> phi_tangent(const Vec& nu, const Vec& nudot,
                                  const Vec& alphadot) const;

  /// Energy of the controlled pathway. DoubleBracket mode: the shaped
  /// quadratic g_C(nu,beta) = <nu, muC^-1 nu>/2 + s <G beta, I0^-1 G beta>/2
  /// with gradient legs (muC^-1 nu, s G* I0^-1 G beta). Matched mode: the
  /// matched kinetic energy (the conserved Hamiltonian of the matched flow)
  /// with its metric legs as the gradient. shaped_energy_x is the pullback
  /// through the chart change.
  double shaped_energy(const Vec& nu, const Vec& beta) const;
  std::pair<Vec, Vec> shaped_energy_gradient(const Vec& nu, const Vec& beta) const;
  double shaped_energy_x(const Vec& nu, const Vec& alpha) const;

  /// Interconnection tensor applied to (v, Y) in d x g at the point nu
  /// (independent of beta):
  ///   ( sign*coad(v,nu) - sign*s*coad(mu0^-1 A0* I0 (G*)^-1 Y, nu),
  ///     -sign*s * G^-1 I0 A0 mu0^-1 coad(v,nu) ).
  std::pair<Vec, Vec> interconnection_apply(const Vec& nu, const Vec& v,
                                            const Vec& Y) const;

  /// Damping tensor applied to (v, Y):
  ///   s * ( -coad(mu0^-1 A0* I0 A0 mu0^-1 coad(v,nu), nu),  G^-1 I0 (G*)^-1 Y ).
  std::pair<Vec, Vec> damping_apply(const Vec& nu, const Vec& v,
                                    const Vec& Y) const;

  /// Closed-loop field in the Z chart, direct expansion:
  ///   nud = sign*coad(muC^-1 nu, nu) - sign*coad(mu0^-1 A0* G beta, nu)
  ///         + sign*coad(mu0^-1 A0* N(nu), nu)
  ///   betad = -beta - G^-1 N(nu).
  std::pair<Vec, Vec> closed_loop_field(const Vec& nu, const Vec& beta) const;

  /// Same field assembled as (Pi_C - R_C) applied to the shaped-energy
  /// gradient; kept permanently as a mutual oracle for the expansion above.
  std::pair<Vec, Vec> closed_loop_field_tensor(const Vec& nu,
                                               const Vec& beta) const;

  /// Matched-mode field in the Z chart: the Lie-Poisson field of the matched
  /// metric, nud = sign*coad(u,nu), betad = sign*coad(X,beta).
  std::pair<Vec, Vec> matched_field(const Vec& nu, const Vec& beta) const;

  /// Feedback-controlled field in the X chart. DoubleBracket mode:
  ///   nud = sign*coad(u,nu) with u = mu0^-1(nu - A0* alpha)
  ///   alphad = -sign*C nud' - sign*dN(nu) nud' - alpha - C nu - 2 N(nu)
  /// with nud' = coad(u,nu). Matched mode: the non-dissipative controlled
  /// equations (force reduces to the matching route).
  std::pair<Vec, Vec> controlled_field(const Vec& nu, const Vec& alpha) const;

  /// d/dt g_C along the closed loop:
  /// -s ||N(nu)||^2_{I0^-1} - s ||G beta||^2_{I0^-1}.
  double energy_rate(const Vec& nu, const Vec& beta) const;

  /// Signed double-bracket kernel Gamma = sign * mu0^-1 A0* I0 A0 mu0^-1.
  Vec gamma_apply(const Vec& w) const;

  /// Symmetric bracket {{f,h}}(nu) = <coad(df,nu), Gamma coad(dh,nu)>.
  double symmetric_bracket(const Observable& f, const Observable& h,
                           const Vec& nu) const;

 private:
  ControlledSystem(KaluzaKlein kk, GainSet gains, ControlMode mode);
  void require_mode(ControlMode m, const char* op) const;
  Vec dh0_dalpha_at(const Vec& nu, const Vec& beta) const;

  KaluzaKlein kk_;
  GainSet gains_;
  ControlMode mode_;
  LinearMap muC_, muC_inv_;
  LinearMap G_inv_, Gadj_, Gadj_inv_, I0_inv_;
  LinearMap fiber_from_base_;   // I0 A0 mu0^-1 : d* -> g*
  LinearMap base_from_fiber_;   // mu0^-1 A0*   : g* -> d
  std::optional<MatchedStructure> matched_;
  std::optional<KaluzaKlein> matched_kk_;
};

}  // namespace lpctrl
