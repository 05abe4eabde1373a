#include "lpctrl/closed_loop.hpp"

namespace lpctrl {

ControlledSystem::ControlledSystem(KaluzaKlein kk, GainSet gains,
                                   ControlMode mode)
    : kk_(std::move(kk)), gains_(std::move(gains)), mode_(mode) {
  if (gains_.C.rows() != kk_.dim_g() || gains_.C.cols() != kk_.dim_d())
    throw DimensionError("ControlledSystem: C must be dim(g) x dim(d)");
  if (gains_.G.rows() != kk_.dim_g() || gains_.G.cols() != kk_.dim_g())
    throw DimensionError("ControlledSystem: G must be dim(g) x dim(g)");
  if (gains_.s != 1 && gains_.s != -1)
    throw Error("ControlledSystem: s must be +1 or -1");

  ControlledMetric cm = controlled_metric(kk_, gains_.C);
  if (!cm.admissible)
    throw Error("ControlledSystem: mu_C is not an inner product (min eig " +
                std::to_string(cm.min_eigenvalue) + ")");
  muC_ = cm.muC;
  muC_inv_ = muC_.inverse();
  G_inv_ = gains_.G.inverse();
  Gadj_ = gains_.G.adjoint();
  Gadj_inv_ = Gadj_.inverse();
  I0_inv_ = kk_.I0().inverse();
  fiber_from_base_ =
      kk_.I0().compose(kk_.A0()).compose(kk_.mu0().inverse());
  base_from_fiber_ = kk_.mu0().inverse().compose(kk_.A0_adj());
}

ControlledSystem ControlledSystem::matched(KaluzaKlein kk, GainSet gains) {
  MatchOutcome mo = match_structure(kk, gains);
  if (!mo.ok)
    throw Error("matched system: matching condition violated (" +
                mo.violated_bullet + ", residual " +
                std::to_string(mo.residual) + ")");
  ControlledSystem sys(std::move(kk), std::move(gains), ControlMode::Matched);
  sys.matched_ = mo.structure;
  sys.matched_kk_.emplace(sys.kk_.d(), sys.kk_.g(), mo.structure.muC,
                          mo.structure.IC, mo.structure.AC);
  return sys;
}

ControlledSystem ControlledSystem::double_bracket(KaluzaKlein kk,
                                                  GainSet gains) {
  return ControlledSystem(std::move(kk), std::move(gains),
                          ControlMode::DoubleBracket);
}

const MatchedStructure& ControlledSystem::matched_structure() const {
  require_mode(ControlMode::Matched, "matched_structure");
  return *matched_;
}

void ControlledSystem::require_mode(ControlMode m, const char* op) const {
  if (mode_ != m)
    throw Error(std::string(op) + ": not available in " +
                (mode_ == ControlMode::Matched ? "matched" : "double-bracket") +
                " mode");
}

State ControlledSystem::make_state(Vec nu, Vec second, Chart chart) const {
  return State{DualElement(kk_.d(), std::move(nu)),
               DualElement(kk_.g(), std::move(second)), chart};
}

Vec ControlledSystem::double_bracket_term(const Vec& nu) const {
  require_mode(ControlMode::DoubleBracket, "double_bracket_term");
  Vec w = kk_.d()->coad(muC_inv_.apply(nu), nu);
  return (sgn() * s()) * fiber_from_base_.apply(w);
}

Vec ControlledSystem::double_bracket_term_directional(const Vec& nu,
                                                      const Vec& eta) const {
  require_mode(ControlMode::DoubleBracket, "double_bracket_term_directional");
  Vec w = kk_.d()->coad(muC_inv_.apply(eta), nu) +
          kk_.d()->coad(muC_inv_.apply(nu), eta);
  return (sgn() * s()) * fiber_from_base_.apply(w);
}

Vec ControlledSystem::lp_control_force(const Vec& nu, const Vec& alpha) const {
  auto [u, X] = kk_.metric_solve(nu, alpha);
  Vec n = mode_ == ControlMode::DoubleBracket ? double_bracket_term(nu)
                                              : Vec(Vec::Zero(kk_.dim_g()));
  Vec q = gains_.C.apply(nu) + n + alpha;
  Vec w = kk_.d()->coad(u, nu);
  Vec force = gains_.G.apply(kk_.g()->coad(X, G_inv_.apply(q))) -
              gains_.C.apply(w) - kk_.g()->coad(X, alpha);
  if (mode_ == ControlMode::DoubleBracket)
    force -= double_bracket_term_directional(nu, w);
  return sgn() * force;
}

Vec ControlledSystem::dh0_dalpha_at(const Vec& nu, const Vec& beta) const {
  Vec alpha = phi_inverse(nu, beta);
  return kk_.metric_solve(nu, alpha).second;
}

Vec ControlledSystem::dissipative_force(const Vec& nu, const Vec& beta) const {
  require_mode(ControlMode::DoubleBracket, "dissipative_force");
  Vec X = dh0_dalpha_at(nu, beta);
  return -sgn() * kk_.g()->coad(X, beta) - beta -
         G_inv_.apply(double_bracket_term(nu));
}

Vec ControlledSystem::phi_forward(const Vec& nu, const Vec& alpha) const {
  Vec q = alpha + gains_.C.apply(nu);
  if (mode_ == ControlMode::DoubleBracket) q += double_bracket_term(nu);
  return G_inv_.apply(q);
}

Vec ControlledSystem::phi_inverse(const Vec& nu, const Vec& beta) const {
  Vec alpha = gains_.G.apply(beta) - gains_.C.apply(nu);
  if (mode_ == ControlMode::DoubleBracket) alpha -= double_bracket_term(nu);
  return alpha;
}

State ControlledSystem::to_chart(const State& st, Chart target) const {
  if (st.chart == target) return st;
  Vec second = st.chart == Chart::X
                   ? phi_forward(st.nu.coeffs, st.second.coeffs)
                   : phi_inverse(st.nu.coeffs, st.second.coeffs);
  return make_state(st.nu.coeffs, std::move(second), target);
}

std::pair<Vec, Vec> ControlledSystem::phi_tangent(const Vec& nu,
                                                  const Vec& nudot,
                                                  const Vec& alphadot) const {
  Vec q = alphadot + gains_.C.apply(nudot);
  if (mode_ == ControlMode::DoubleBracket)
    q += double_bracket_term_directional(nu, nudot);
  return {nudot, G_inv_.apply(q)};
}

double ControlledSystem::shaped_energy(const Vec& nu, const Vec& beta) const {
  if (mode_ == ControlMode::Matched) return matched_kk_->h0(nu, beta);
  Vec gb = gains_.G.apply(beta);
  return 0.5 * kk_.d()->pairing(nu, muC_inv_.apply(nu)) +
         0.5 * s() * kk_.g()->pairing(gb, I0_inv_.apply(gb));
}

std::pair<Vec, Vec> ControlledSystem::shaped_energy_gradient(
    const Vec& nu, const Vec& beta) const {
  if (mode_ == ControlMode::Matched) return matched_kk_->metric_solve(nu, beta);
  Vec gb = gains_.G.apply(beta);
  return {muC_inv_.apply(nu), s() * Gadj_.apply(I0_inv_.apply(gb))};
}

double ControlledSystem::shaped_energy_x(const Vec& nu,
                                         const Vec& alpha) const {
  return shaped_energy(nu, phi_forward(nu, alpha));
}

std::pair<Vec, Vec> ControlledSystem::interconnection_apply(const Vec& nu,
                                                            const Vec& v,
                                                            const Vec& Y) const {
  Vec w = kk_.d()->coad(v, nu);
  Vec q = base_from_fiber_.apply(kk_.I0().apply(Gadj_inv_.apply(Y)));
  Vec nu_leg = sgn() * w - (sgn() * s()) * kk_.d()->coad(q, nu);
  Vec g_leg = -(sgn() * s()) * G_inv_.apply(fiber_from_base_.apply(w));
  return {nu_leg, g_leg};
}

std::pair<Vec, Vec> ControlledSystem::damping_apply(const Vec& nu,
                                                    const Vec& v,
                                                    const Vec& Y) const {
  Vec w = kk_.d()->coad(v, nu);
  Vec q = base_from_fiber_.apply(fiber_from_base_.apply(w));
  Vec nu_leg = -s() * kk_.d()->coad(q, nu);
  Vec g_leg = s() * G_inv_.apply(kk_.I0().apply(Gadj_inv_.apply(Y)));
  return {nu_leg, g_leg};
}

std::pair<Vec, Vec> ControlledSystem::closed_loop_field(const Vec& nu,
                                                        const Vec& beta) const {
  require_mode(ControlMode::DoubleBracket, "closed_loop_field");
  Vec n = double_bracket_term(nu);
  Vec nudot = sgn() * kk_.d()->coad(muC_inv_.apply(nu), nu) -
              sgn() * kk_.d()->coad(
                          base_from_fiber_.apply(gains_.G.apply(beta)), nu) +
              sgn() * kk_.d()->coad(base_from_fiber_.apply(n), nu);
  Vec betadot = -beta - G_inv_.apply(n);
  return {nudot, betadot};
}

std::pair<Vec, Vec> ControlledSystem::closed_loop_field_tensor(
    const Vec& nu, const Vec& beta) const {
  require_mode(ControlMode::DoubleBracket, "closed_loop_field_tensor");
  auto [gv, gY] = shaped_energy_gradient(nu, beta);
  auto [pi_nu, pi_g] = interconnection_apply(nu, gv, gY);
  auto [r_nu, r_g] = damping_apply(nu, gv, gY);
  return {pi_nu - r_nu, pi_g - r_g};
}

std::pair<Vec, Vec> ControlledSystem::matched_field(const Vec& nu,
                                                    const Vec& beta) const {
  require_mode(ControlMode::Matched, "matched_field");
  auto [u, X] = matched_kk_->metric_solve(nu, beta);
  return {sgn() * kk_.d()->coad(u, nu), sgn() * kk_.g()->coad(X, beta)};
}

std::pair<Vec, Vec> ControlledSystem::controlled_field(const Vec& nu,
                                                       const Vec& alpha) const {
  auto [u, X] = kk_.metric_solve(nu, alpha);
  Vec w = kk_.d()->coad(u, nu);
  Vec nudot = sgn() * w;
  if (mode_ == ControlMode::DoubleBracket) {
    Vec alphadot = -sgn() * gains_.C.apply(w) -
                   sgn() * double_bracket_term_directional(nu, w) - alpha -
                   gains_.C.apply(nu) - 2.0 * double_bracket_term(nu);
    return {nudot, alphadot};
  }
  // Matched mode: free fiber leg plus the non-dissipative control force.
  Vec alphadot = sgn() * kk_.g()->coad(X, alpha) + lp_control_force(nu, alpha);
  return {nudot, alphadot};
}

double ControlledSystem::energy_rate(const Vec& nu, const Vec& beta) const {
  require_mode(ControlMode::DoubleBracket, "energy_rate");
  Vec n = double_bracket_term(nu);
  Vec gb = gains_.G.apply(beta);
  return -s() * (kk_.g()->pairing(n, I0_inv_.apply(n)) +
                 kk_.g()->pairing(gb, I0_inv_.apply(gb)));
}

Vec ControlledSystem::gamma_apply(const Vec& w) const {
  return sgn() * base_from_fiber_.apply(fiber_from_base_.apply(w));
}

double ControlledSystem::symmetric_bracket(const Observable& f,
                                           const Observable& h,
                                           const Vec& nu) const {
  Vec wf = kk_.d()->coad(f.gradient(nu), nu);
  Vec wh = kk_.d()->coad(h.gradient(nu), nu);
  return kk_.d()->pairing(wf, gamma_apply(wh));
}

}  // namespace lpctrl
