#include "lpctrl/mhd2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lpctrl {

namespace {

double fiber_norm(const ControlledSystem& sys, const Vec& q) {
  Vec iq = sys.kk().I0().solve(q);
  return std::sqrt(std::max(0.0, sys.g()->pairing(q, iq)));
}

}  // namespace

ShearEquilibrium make_shear_equilibrium(const ChannelConfig& cfg) {
  cfg.validate();
  ShearEquilibrium eq;
  eq.u_x = [](double, double y) { return std::sin(y); };
  eq.psi = [](double, double y) { return std::cos(y); };
  eq.omega = [](double, double y) { return -std::cos(y); };
  eq.potential_coefficient = cfg.gamma / cfg.e;
  return eq;
}

double ShearEquilibrium::identity_residual(const ChannelConfig& cfg) const {
  // omega_e = -(1-gamma) psi_e for the shaped representatives; both sides are
  // multiples of the background profile, so compare the coefficients.
  double omega_coeff = -(1.0 - cfg.gamma);
  double psi_coeff = 1.0;
  return std::abs(omega_coeff + (1.0 - cfg.gamma) * psi_coeff);
}

SpectralField delta_gamma_apply(const ChannelConfig& cfg,
                                const SpectralField& f) {
  cfg.validate();
  if (f.coeffs.rows() != cfg.Nx || f.coeffs.cols() != cfg.Ny)
    throw DimensionError("delta_gamma_apply: field shape");
  Mat out = f.coeffs;
  for (int m = 1; m <= cfg.Nx; ++m)
    for (int n = 1; n <= cfg.Ny; ++n)
      out(m - 1, n - 1) *= -((m / cfg.L) * (m / cfg.L) +
                             (1.0 - cfg.gamma) * (n / cfg.W) * (n / cfg.W));
  return SpectralField(std::move(out));
}

SpectralField delta_gamma_solve(const ChannelConfig& cfg,
                                const SpectralField& f) {
  cfg.validate();
  if (f.coeffs.rows() != cfg.Nx || f.coeffs.cols() != cfg.Ny)
    throw DimensionError("delta_gamma_solve: field shape");
  Mat out = f.coeffs;
  for (int m = 1; m <= cfg.Nx; ++m)
    for (int n = 1; n <= cfg.Ny; ++n)
      out(m - 1, n - 1) /= -((m / cfg.L) * (m / cfg.L) +
                             (1.0 - cfg.gamma) * (n / cfg.W) * (n / cfg.W));
  return SpectralField(std::move(out));
}

double lambda1_gamma(const ChannelConfig& cfg) {
  cfg.validate();
  double value = 1.0 / (cfg.L * cfg.L) + (1.0 - cfg.gamma) / (cfg.W * cfg.W);
  double smallest = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= cfg.Nx; ++m)
    for (int n = 1; n <= cfg.Ny; ++n)
      smallest = std::min(smallest,
                          (m / cfg.L) * (m / cfg.L) +
                              (1.0 - cfg.gamma) * (n / cfg.W) * (n / cfg.W));
  if (std::abs(smallest - value) > 1e-12 * std::max(1.0, value))
    throw Error("lambda1_gamma: retained multipliers disagree with formula");
  return value;
}

MarginReport stability_margin(const ChannelConfig& cfg) {
  cfg.validate();
  MarginReport r;
  r.controlled =
      1.0 / ((1.0 - cfg.gamma) * cfg.L * cfg.L) + 1.0 / (cfg.W * cfg.W) - 1.0;
  r.uncontrolled = 1.0 / (cfg.L * cfg.L) + 1.0 / (cfg.W * cfg.W) - 1.0;
  return r;
}

Vec advect(const SpectralWorkspace& ws, const Vec& stream, const Vec& vorticity) {
  return ws.coad(stream, vorticity);
}

State ChannelSystem::equilibrium_z() const {
  return sys.make_state(nu_e, Vec::Zero(ws->dim()), Chart::Z);
}

State ChannelSystem::equilibrium_x() const {
  return sys.make_state(nu_e, alpha_e, Chart::X);
}

ChannelSystem build_mhd_system(const ChannelConfig& cfg) {
  cfg.validate();
  auto ws = std::make_shared<const SpectralWorkspace>(cfg);
  AlgebraPtr fluid = SpectralWorkspace::make_descriptor(ws);
  const int n = ws->dim();

  LinearMap mu0 =
      LinearMap::diagonal(Space::D, Space::DStar, ws->laplacian_multipliers());
  LinearMap I0 = LinearMap::diagonal(Space::G, Space::GStar,
                                     Vec::Constant(n, -cfg.e * cfg.e));
  LinearMap A0 = LinearMap::diagonal(Space::D, Space::G, Vec::Constant(n, -1.0));
  KaluzaKlein kk(fluid, fluid, mu0, I0, A0);

  GainSet gains;
  Vec c = Vec::Ones(n) - ws->laplacian_multipliers().cwiseQuotient(
                             ws->shaped_laplacian_multipliers());
  gains.C = LinearMap::diagonal(Space::DStar, Space::GStar, c);
  gains.G = LinearMap::identity(Space::GStar, Space::GStar, n);
  gains.s = -1;
  gains.sign = Orientation::Right;

  ChannelSystem cs{cfg, ws,
                   ControlledSystem::double_bracket(std::move(kk), std::move(gains)),
                   Vec::Zero(n), Vec::Zero(n)};
  cs.nu_e(ws->chi_index()) = -(1.0 - cfg.gamma);
  cs.alpha_e(ws->chi_index()) = -cfg.gamma;
  return cs;
}

CasimirProfile channel_casimir_profile(const ChannelConfig& cfg) {
  return CasimirProfile::linear("enstrophy", -0.5 / (1.0 - cfg.gamma));
}

double l_c_eval(const ChannelSystem& cs, const Vec& nu, const Vec& beta) {
  CasimirProfile profile = channel_casimir_profile(cs.cfg);
  State z = cs.sys.make_state(nu, beta, Chart::Z);
  return lyapunov_eval(cs.sys, profile, z, cs.equilibrium_z());
}

MhdScenarioReport run_shear_scenario(const ChannelConfig& cfg,
                                     double amplitude, int mode_m, int mode_n,
                                     const IntegratorConfig& config) {
  cfg.validate();
  config.validate();
  if (mode_m < 1 || mode_m > cfg.keep_x() || mode_n < 1 || mode_n > cfg.keep_y())
    throw Error("run_shear_scenario: perturbation mode outside retained band");

  MhdScenarioReport rep;
  MarginReport margins = stability_margin(cfg);
  rep.controlled_margin = margins.controlled;
  rep.uncontrolled_margin = margins.uncontrolled;
  rep.certified = margins.controlled > 0.0;

  const double kBlowUpNorm = 1e6;

  // Controlled run in the closed-loop chart.
  ChannelSystem cs = build_mhd_system(cfg);
  const SpectralWorkspace& ws = *cs.ws;
  Vec nu0 = cs.nu_e;
  nu0(ws.index(mode_m, mode_n)) += amplitude;
  Vec beta0 = Vec::Zero(ws.dim());
  State z0 = cs.sys.make_state(nu0, beta0, Chart::Z);

  const Vec nu_e = cs.nu_e;
  std::vector<Monitor> monitors;
  monitors.push_back({"lyapunov", [&cs](const Vec& nu, const Vec& beta) {
                        return l_c_eval(cs, nu, beta);
                      }});
  monitors.push_back({"enstrophy", [&ws](const Vec& nu, const Vec&) {
                        return ws.enstrophy(nu);
                      }});
  monitors.push_back({"mean_vorticity", [&ws](const Vec& nu, const Vec&) {
                        return ws.mean_vorticity(nu);
                      }});
  monitors.push_back({"shaping_norm", [&cs](const Vec& nu, const Vec&) {
                        return fiber_norm(cs.sys, cs.sys.double_bracket_term(nu));
                      }});
  monitors.push_back({"field_norm", [&cs](const Vec&, const Vec& beta) {
                        return fiber_norm(cs.sys, beta);
                      }});
  monitors.push_back({"dissipation_rate", [&cs](const Vec& nu, const Vec& beta) {
                        return cs.sys.energy_rate(nu, beta);
                      }});
  monitors.push_back({"perturbation_sup", [&ws, nu_e](const Vec& nu, const Vec&) {
                        return ws.sup_norm_on_grid(nu - nu_e);
                      }});

  Field controlled_field = [&cs](const Vec& nu, const Vec& beta) {
    return cs.sys.closed_loop_field(nu, beta);
  };
  rep.controlled = integrate(controlled_field, z0, config, monitors);

  const std::vector<double>& L = rep.controlled.series("lyapunov");
  double scale = std::max(std::abs(L.front()), 1e-30);
  for (std::size_t i = 1; i < L.size(); ++i)
    if (L[i] - L[i - 1] > 1e-10 * scale) ++rep.lyapunov_violations;

  const std::vector<double>& ens = rep.controlled.series("enstrophy");
  double ens0 = std::abs(ens.front());
  for (double v : ens)
    rep.enstrophy_drift = std::max(rep.enstrophy_drift, std::abs(v - ens.front()) / ens0);

  for (double v : rep.controlled.series("perturbation_sup"))
    rep.max_perturbation_sup = std::max(rep.max_perturbation_sup, v);
  for (const Vec& nu : rep.controlled.nu)
    if (nu.cwiseAbs().maxCoeff() > kBlowUpNorm) rep.blow_up = true;

  rep.terminal_shaping_norm = rep.controlled.series("shaping_norm").back();
  rep.terminal_field_norm = rep.controlled.series("field_norm").back();

  // H1 norm (Laplacian-weighted) of the terminal perturbation.
  {
    const Vec& nuT = rep.controlled.nu.back();
    Vec d = nuT - cs.nu_e;
    double h1 = 0.0;
    for (int m = 1; m <= cfg.Nx; ++m)
      for (int n = 1; n <= cfg.Ny; ++n) {
        double kap = (m / cfg.L) * (m / cfg.L) + (n / cfg.W) * (n / cfg.W);
        double w = d(ws.index(m, n));
        h1 += ws.cell() * w * w * (1.0 + 1.0 / kap);
      }
    double dchi = d(ws.chi_index());
    h1 += ws.background_norm_sq() * dchi * dchi * 2.0;
    rep.h1_perturbation_terminal = std::sqrt(h1);
  }

  // Reference run: free flow at gamma = 0 from the same perturbation.
  {
    ChannelConfig cfg0 = cfg;
    cfg0.gamma = 0.0;
    ChannelSystem free_cs = build_mhd_system(cfg0);
    const SpectralWorkspace& ws0 = *free_cs.ws;
    Vec fnu0 = free_cs.nu_e;
    fnu0(ws0.index(mode_m, mode_n)) += amplitude;
    Vec falpha0 = Vec::Zero(ws0.dim());
    const Vec fnu_e = free_cs.nu_e;
    const KaluzaKlein& kk0 = free_cs.sys.kk();

    std::vector<Monitor> fmon;
    fmon.push_back({"perturbation_energy",
                    [&ws0, &cfg0, fnu_e](const Vec& nu, const Vec&) {
                      Vec d = nu - fnu_e;
                      double energy = 0.0;
                      for (int m = 1; m <= cfg0.Nx; ++m)
                        for (int n = 1; n <= cfg0.Ny; ++n) {
                          double kap = (m / cfg0.L) * (m / cfg0.L) +
                                       (n / cfg0.W) * (n / cfg0.W);
                          double w = d(ws0.index(m, n));
                          energy += 0.5 * ws0.cell() * w * w / kap;
                        }
                      double dchi = d(ws0.chi_index());
                      energy += 0.5 * ws0.background_norm_sq() * dchi * dchi;
                      return energy;
                    }});
    Field free_field = [&kk0](const Vec& nu, const Vec& alpha) {
      return kk0.free_field(Orientation::Right, nu, alpha);
    };
    State x0 = free_cs.sys.make_state(fnu0, falpha0, Chart::X);
    rep.uncontrolled = integrate(free_field, x0, config, fmon);
    const std::vector<double>& E = rep.uncontrolled.series("perturbation_energy");
    double e0 = std::max(E.front(), 1e-300);
    for (double v : E)
      rep.uncontrolled_growth = std::max(rep.uncontrolled_growth, v / e0);
  }

  if (!rep.certified) {
    rep.verdict = "no Lyapunov certificate";
  } else if (rep.blow_up) {
    rep.verdict = "controlled run blew up";
  } else if (rep.lyapunov_violations > 0) {
    rep.verdict = "Lyapunov function increased";
  } else if (rep.terminal_shaping_norm >= 1e-4 || rep.terminal_field_norm >= 1e-4) {
    rep.verdict = "shaping or field norm did not decay";
  } else if (rep.enstrophy_drift >= 1e-6) {
    rep.verdict = "enstrophy drifted";
  } else {
    rep.stable = true;
  }
  return rep;
}

}  // namespace lpctrl
