#include "lpctrl/satellite.hpp"

#include <cmath>

namespace lpctrl {

void SatelliteParams::validate() const {
  if (!(0.0 < lambda1 && lambda1 < lambda2 && lambda2 < I3))
    throw Error("SatelliteParams: need 0 < lambda1 < lambda2 < I3");
  if (i3 <= 0.0) throw Error("SatelliteParams: i3 must be > 0");
  if (!(k * i3 / I3 > -1.0))
    throw Error("SatelliteParams: need k i3/I3 > -1");
}

double SatelliteParams::gain_threshold() const {
  return gain_threshold_satellite(lambda2, I3, i3);
}

KaluzaKlein satellite_kaluza_klein(const SatelliteParams& p) {
  p.validate();
  AlgebraPtr d = AlgebraDescriptor::so3();
  AlgebraPtr g = AlgebraDescriptor::abelian(1, "rotor");
  Vec mu0(3);
  mu0 << p.lambda1, p.lambda2, p.I3;
  Mat A0(1, 3);
  A0 << 0.0, 0.0, 1.0;
  return KaluzaKlein(d, g, LinearMap::diagonal(Space::D, Space::DStar, mu0),
                     LinearMap::diagonal(Space::G, Space::GStar,
                                         Vec::Constant(1, p.i3)),
                     LinearMap::dense(Space::D, Space::G, A0));
}

ControlledSystem make_satellite_system(const SatelliteParams& p,
                                       SatelliteMode mode, int s) {
  KaluzaKlein kk = satellite_kaluza_klein(p);
  Mat C(1, 3);
  C << 0.0, 0.0, p.k * p.i3 / p.I3;
  GainSet gains;
  gains.C = LinearMap::dense(Space::DStar, Space::GStar, C);
  gains.s = s;
  gains.sign = Orientation::Left;
  if (mode == SatelliteMode::Matched) {
    double G = 1.0 + p.k * (p.i3 + p.I3) / p.I3;
    gains.G = LinearMap::diagonal(Space::GStar, Space::GStar, Vec::Constant(1, G));
    return ControlledSystem::matched(std::move(kk), std::move(gains));
  }
  gains.G = LinearMap::identity(Space::GStar, Space::GStar, 1);
  return ControlledSystem::double_bracket(std::move(kk), std::move(gains));
}

Vec middle_axis_hessian_diagonal(const SatelliteParams& p, double curvature,
                                 int s) {
  Vec d(4);
  d << 1.0 / p.lambda1 - 1.0 / p.lambda2, curvature,
      (1.0 + p.k * p.i3 / p.I3) / p.I3 - 1.0 / p.lambda2, s / p.i3;
  return d;
}

ScenarioReport run_middle_axis_scenario(const SatelliteParams& p,
                                        double perturbation,
                                        const IntegratorConfig& config,
                                        double curvature) {
  p.validate();
  config.validate();

  ScenarioReport rep;
  const double kDivergenceNorm = 1e6;

  if (p.k == 0.0) {
    // Free system: middle-axis rotation is the unstable reference run.
    KaluzaKlein kk = satellite_kaluza_klein(p);
    Vec nu0(3);
    nu0 << perturbation, 1.0, perturbation;
    Vec a0 = Vec::Constant(1, perturbation);
    Field field = [&kk](const Vec& nu, const Vec& alpha) {
      return kk.free_field(Orientation::Left, nu, alpha);
    };
    State x0{DualElement(kk.d(), nu0), DualElement(kk.g(), a0), Chart::X};
    rep.trajectory = integrate(field, x0, config);
    rep.initial_spin_norm = nu0.norm();
    for (std::size_t i = 0; i < rep.trajectory.samples(); ++i) {
      const Vec& nu = rep.trajectory.nu[i];
      double axis = std::hypot(nu(0), nu(2));
      rep.max_axis_distance = std::max(rep.max_axis_distance, axis);
      if (nu.norm() > kDivergenceNorm) rep.diverged = true;
    }
    const Vec& nuT = rep.trajectory.nu.back();
    rep.terminal_axis_distance = std::hypot(nuT(0), nuT(2));
    rep.terminal_spin_norm = nuT.norm();
    rep.stable = false;
    rep.verdict = "free middle-axis rotation is unstable";
    return rep;
  }

  if (p.k <= p.gain_threshold())
    throw Error("run_middle_axis_scenario: k must exceed the gain threshold " +
                std::to_string(p.gain_threshold()));
  if (curvature <= 0.0)
    throw Error("run_middle_axis_scenario: profile curvature must be > 0");
  ControlledSystem sys = make_satellite_system(p, SatelliteMode::DoubleBracket, +1);

  Vec nu0(3);
  nu0 << perturbation, 1.0, perturbation;
  Vec beta0 = Vec::Constant(1, perturbation);
  State z0 = sys.make_state(nu0, beta0, Chart::Z);
  State ze = sys.make_state(Vec::Unit(3, 1), Vec::Zero(1), Chart::Z);

  CasimirProfile profile = CasimirProfile::quadratic(
      "spin_sq_half", 0.5, -1.0 / p.lambda2, curvature);

  std::vector<Monitor> monitors;
  monitors.push_back({"lyapunov", [&sys, profile, ze](const Vec& nu, const Vec& beta) {
                        State z = sys.make_state(nu, beta, Chart::Z);
                        return lyapunov_eval(sys, profile, z, ze);
                      }});
  monitors.push_back({"energy_shaped", [&sys](const Vec& nu, const Vec& beta) {
                        return sys.shaped_energy(nu, beta);
                      }});
  monitors.push_back({"spin_sq_half", [&sys](const Vec& nu, const Vec&) {
                        return casimir_eval(*sys.d(), "spin_sq_half", nu);
                      }});
  monitors.push_back({"shaping_norm", [&sys](const Vec& nu, const Vec&) {
                        return sys.double_bracket_term(nu).norm();
                      }});
  monitors.push_back({"fiber_norm", [](const Vec&, const Vec& beta) {
                        return beta.norm();
                      }});
  monitors.push_back({"dissipation_rate", [&sys](const Vec& nu, const Vec& beta) {
                        return sys.energy_rate(nu, beta);
                      }});

  Field field = [&sys](const Vec& nu, const Vec& beta) {
    return sys.closed_loop_field(nu, beta);
  };
  rep.trajectory = integrate(field, z0, config, monitors);

  const std::vector<double>& L = rep.trajectory.series("lyapunov");
  for (std::size_t i = 1; i < L.size(); ++i)
    if (L[i] - L[i - 1] > 1e-12) ++rep.lyapunov_violations;

  for (std::size_t i = 0; i < rep.trajectory.samples(); ++i) {
    const Vec& nu = rep.trajectory.nu[i];
    const Vec& beta = rep.trajectory.second[i];
    double axis = std::sqrt(nu(0) * nu(0) + nu(2) * nu(2) + beta.squaredNorm());
    rep.max_axis_distance = std::max(rep.max_axis_distance, axis);
    if (nu.norm() > kDivergenceNorm) rep.diverged = true;
  }

  const Vec& nuT = rep.trajectory.nu.back();
  const Vec& betaT = rep.trajectory.second.back();
  rep.terminal_axis_distance =
      std::sqrt(nuT(0) * nuT(0) + nuT(2) * nuT(2) + betaT.squaredNorm());
  rep.terminal_shaping_norm = sys.double_bracket_term(nuT).norm();
  rep.terminal_fiber_norm = betaT.norm();
  rep.initial_spin_norm = nu0.norm();
  rep.terminal_spin_norm = nuT.norm();

  if (rep.diverged) {
    rep.verdict = "trajectory diverged";
  } else if (rep.lyapunov_violations > 0) {
    rep.verdict = "Lyapunov function increased";
  } else if (rep.terminal_axis_distance >= 1e-6) {
    rep.verdict = "no convergence to the middle axis";
  } else {
    rep.stable = true;
  }
  return rep;
}

}  // namespace lpctrl
