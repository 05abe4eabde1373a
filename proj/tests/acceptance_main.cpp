// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include "galerkin_oracle.hpp"

#include "lpctrl/runner.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace lpctrl;

namespace {

int g_failures = 0;

void report(int criterion, const char* what, bool pass, const std::string& detail) {
  std::printf("criterion %d %-4s %s (%s)\n", criterion, pass ? "PASS" : "FAIL",
              what, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------------------
// 1. Structural suite: skewness/symmetry/semidefiniteness on 100 random
//    states per system, matching residuals, local-coordinate equivalence.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Check> checks = verify_structure(20260811, 100, 50);
  double elapsed = wall_seconds(t0);
  bool pass = true;
  double worst = 0.0;
  std::string worst_name;
  for (const Check& c : checks) {
    if (!c.pass) {
      pass = false;
      worst_name = c.name;
    }
    if (c.tolerance > 0.0) worst = std::max(worst, c.residual / c.tolerance);
  }
  pass = pass && elapsed < 5.0;
  report(1, "structural residual suite", pass,
         "worst residual/tol " + fmt(worst) +
             (worst_name.empty() ? "" : ", failed " + worst_name) + ", " +
             fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 2. Trajectory-level equivalence of the feedback-controlled and closed-loop
//    forms through the chart change, with fourth-order improvement.
void criterion2() {
  ControlledSystem sys =
      make_satellite_system(SatelliteParams{}, SatelliteMode::DoubleBracket, +1);
  // An energetic state: the chart defect of the discrete flows is fourth
  // order but strongly contracted, so near the equilibrium it sits below the
  // roundoff floor and the halving ratio would be unmeasurable.
  Vec nu0(3);
  nu0 << 12.0, 6.0, -10.0;
  Vec beta0 = Vec::Constant(1, 4.0);
  Vec alpha0 = sys.phi_inverse(nu0, beta0);

  auto sup_error = [&](double h) {
    IntegratorConfig cfg;
    cfg.step = h;
    cfg.horizon = 10.0;
    cfg.monitor_stride = static_cast<int>(std::lround(0.1 / h));
    Field fx = [&sys](const Vec& nu, const Vec& alpha) {
      return sys.controlled_field(nu, alpha);
    };
    Field fz = [&sys](const Vec& nu, const Vec& beta) {
      return sys.closed_loop_field(nu, beta);
    };
    Trajectory tx = integrate(fx, sys.make_state(nu0, alpha0, Chart::X), cfg);
    Trajectory tz = integrate(fz, sys.make_state(nu0, beta0, Chart::Z), cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < tx.samples(); ++i) {
      Vec beta = sys.phi_forward(tx.nu[i], tx.second[i]);
      err = std::max(err, (tx.nu[i] - tz.nu[i]).cwiseAbs().maxCoeff());
      err = std::max(err, (beta - tz.second[i]).cwiseAbs().maxCoeff());
    }
    return err;
  };

  double e1 = sup_error(1e-3);
  double e2 = sup_error(5e-4);
  double ratio = e1 / e2;
  bool pass = e1 < 1e-6 && ratio > 16.0 * 0.8 && ratio < 16.0 * 1.2;
  report(2, "chart equivalence of the controlled trajectories", pass,
         "sup error " + fmt(e1) + " at h=1e-3, halving ratio " + fmt(ratio));
}

// ---------------------------------------------------------------------------
// 3. Rate identity: finite-difference energy slope vs the dissipation rate,
//    second order in the step with relative mismatch < 1e-5 at h = 1e-3.
struct RateProbe {
  double rel_mismatch;
  double richardson;
};

template <typename FieldLike>
RateProbe probe_rate(const ControlledSystem& sys, const FieldLike& field,
                     const State& z0) {
  auto mismatch_at = [&](double h) {
    IntegratorConfig cfg;
    cfg.step = h;
    cfg.horizon = 64.0 * h;
    cfg.monitor_stride = 1;
    Trajectory t = integrate(field, z0, cfg);
    IntegratorConfig half = cfg;
    half.step = h / 2.0;
    Trajectory th = integrate(field, z0, half);
    double worst = 0.0;
    for (std::size_t i = 8; i + 1 < t.samples(); i += 8) {
      double g0 = sys.shaped_energy(t.nu[i], t.second[i]);
      double g1 = sys.shaped_energy(t.nu[i + 1], t.second[i + 1]);
      const Vec& num = th.nu[2 * i + 1];  // midpoint state from the half run
      const Vec& sem = th.second[2 * i + 1];
      double rate = sys.energy_rate(num, sem);
      worst = std::max(worst, std::abs((g1 - g0) / h - rate) /
                                  std::max(1e-12, std::abs(rate)));
    }
    return worst;
  };
  RateProbe probe;
  probe.rel_mismatch = mismatch_at(1e-3);
  probe.richardson = mismatch_at(2e-3) / probe.rel_mismatch;
  return probe;
}

void criterion3() {
  ControlledSystem sat =
      make_satellite_system(SatelliteParams{}, SatelliteMode::DoubleBracket, +1);
  Vec nu0(3);
  nu0 << 1.0, 1.0, 0.5;
  RateProbe sat_probe =
      probe_rate(sat, [&sat](const Vec& n, const Vec& b) {
        return sat.closed_loop_field(n, b);
      }, sat.make_state(nu0, Vec::Constant(1, 0.4), Chart::Z));

  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = 8;
  ChannelSystem cs = build_mhd_system(cfg);
  Vec mnu0 = cs.nu_e;
  mnu0(cs.ws->index(1, 1)) += 0.05;
  mnu0(cs.ws->index(2, 2)) += 0.03;
  Vec mbeta0 = Vec::Zero(cs.ws->dim());
  mbeta0(cs.ws->index(1, 2)) = 0.02;
  RateProbe mhd_probe =
      probe_rate(cs.sys, [&cs](const Vec& n, const Vec& b) {
        return cs.sys.closed_loop_field(n, b);
      }, cs.sys.make_state(mnu0, mbeta0, Chart::Z));

  // Doubling the step must scale the mismatch by about 4 (second order).
  bool pass = sat_probe.rel_mismatch < 1e-5 && mhd_probe.rel_mismatch < 1e-5 &&
              sat_probe.richardson > 2.5 && sat_probe.richardson < 6.0 &&
              mhd_probe.richardson > 2.5 && mhd_probe.richardson < 6.0;
  report(3, "dissipation-rate identity", pass,
         "rel mismatch satellite " + fmt(sat_probe.rel_mismatch) + " (x" +
             fmt(sat_probe.richardson) + "), channel " +
             fmt(mhd_probe.rel_mismatch) + " (x" + fmt(mhd_probe.richardson) +
             ")");
}

// ---------------------------------------------------------------------------
// 4. Satellite asymptotic stabilization and the free-gain instability.
void criterion4() {
  SatelliteParams p;  // lambda = (1,2), I3 = 3, i3 = 1, k = 2 > 1.5
  IntegratorConfig cfg;
  cfg.step = 1e-3;
  cfg.horizon = 200.0;
  cfg.monitor_stride = 100;
  ScenarioReport controlled = run_middle_axis_scenario(p, 1e-2, cfg);

  SatelliteParams free_p = p;
  free_p.k = 0.0;
  ScenarioReport free_run = run_middle_axis_scenario(free_p, 1e-2, cfg);

  double spin_drift =
      std::abs(controlled.terminal_spin_norm - controlled.initial_spin_norm);
  bool pass = p.gain_threshold() == 1.5 && controlled.lyapunov_violations == 0 &&
              controlled.terminal_axis_distance < 1e-6 && spin_drift < 1e-8 &&
              free_run.max_axis_distance > 0.5;
  report(4, "middle-axis stabilization", pass,
         "axis distance " + fmt(controlled.terminal_axis_distance) +
             ", spin drift " + fmt(spin_drift) + ", violations " +
             std::to_string(controlled.lyapunov_violations) +
             ", free growth " + fmt(free_run.max_axis_distance));
}

// ---------------------------------------------------------------------------
// 5. Threshold reproduction by parameter sweeps.
void criterion5() {
  SweepResult kk = sweep_gain(SatelliteParams{}, 0.0, 3.0, 0.1);
  SweepResult gg = sweep_gamma(ChannelConfig{}, 0.0, 0.9, 0.1);
  const double k_star = 1.5, g_star = 2.0 / 3.0;
  bool pass = kk.flip_found && gg.flip_found &&
              kk.bracket_low <= k_star + 1e-9 && kk.bracket_high >= k_star - 1e-9 &&
              kk.bracket_high - kk.bracket_low <= 0.1 + 1e-9 &&
              gg.bracket_low <= g_star + 1e-9 && gg.bracket_high >= g_star - 1e-9 &&
              gg.bracket_high - gg.bracket_low <= 0.1 + 1e-9;
  report(5, "gain and shaping thresholds", pass,
         "gain flip (" + fmt(kk.bracket_low) + ", " + fmt(kk.bracket_high) +
             "], shaping flip (" + fmt(gg.bracket_low) + ", " +
             fmt(gg.bracket_high) + "]");
}

// ---------------------------------------------------------------------------
// 6. Channel stabilization at 24x24 modes. The criterion pins the geometry,
//    shaping, horizon and mode count; the single-mode amplitude is chosen at
//    1e-3, where the fixed-strength dissipation channel reaches the terminal
//    thresholds within the stated horizon.
void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  ChannelConfig cfg;  // L = W = 2, gamma = 0.8, 24x24
  IntegratorConfig icfg;
  icfg.step = 1e-3;
  icfg.horizon = 50.0;
  icfg.monitor_stride = 100;
  MhdScenarioReport rep = run_shear_scenario(cfg, 1e-3, 1, 1, icfg);
  double elapsed = wall_seconds(t0);
  bool pass = rep.certified && rep.uncontrolled_growth >= 2.0 &&
              rep.lyapunov_violations == 0 && rep.enstrophy_drift < 1e-6 &&
              rep.terminal_shaping_norm < 1e-4 && rep.terminal_field_norm < 1e-4 &&
              !rep.blow_up && elapsed < 600.0;
  report(6, "channel shear stabilization", pass,
         "growth x" + fmt(rep.uncontrolled_growth) + ", enstrophy drift " +
             fmt(rep.enstrophy_drift) + ", terminal norms " +
             fmt(rep.terminal_shaping_norm) + "/" +
             fmt(rep.terminal_field_norm) + ", " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 7. The fast spectral path against the dense quadrature oracle at 8x8.
void criterion7() {
  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = 8;
  cfg.dealias = false;
  ChannelSystem cs = build_mhd_system(cfg);
  testing::GalerkinOracle oracle(cfg);
  std::mt19937_64 rng(20260812);
  std::normal_distribution<double> d(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vec nu = cs.nu_e;
    Vec beta = Vec::Zero(cs.ws->dim());
    for (int m = 1; m <= cfg.Nx; ++m)
      for (int n = 1; n <= cfg.Ny; ++n) {
        nu(cs.ws->index(m, n)) += 0.3 * d(rng) * std::exp(-0.3 * (m + n));
        beta(cs.ws->index(m, n)) = 0.1 * d(rng) * std::exp(-0.3 * (m + n));
      }
    auto [fn, fb] = cs.sys.closed_loop_field(nu, beta);
    auto [on, ob] = oracle.closed_loop_field(nu, beta);
    double scale = std::max(on.cwiseAbs().maxCoeff(), ob.cwiseAbs().maxCoeff());
    worst = std::max(worst, (fn - on).cwiseAbs().maxCoeff() / scale);
    worst = std::max(worst, (fb - ob).cwiseAbs().maxCoeff() / scale);
  }
  report(7, "spectral path vs dense quadrature oracle", worst < 1e-9,
         "worst relative error " + fmt(worst));
}

// ---------------------------------------------------------------------------
// 8. Finite-difference checks of the shaping-term derivative and the shaped
//    energy gradient on 50 random states per system.
void criterion8() {
  std::mt19937_64 rng(20260813);
  std::normal_distribution<double> d(0.0, 1.0);
  const double eps = 1e-5;
  double worst = 0.0;

  auto probe = [&](const ControlledSystem& sys, const Vec& nu, const Vec& beta,
                   const Vec& eta, const Vec& zeta) {
    Vec dn = sys.double_bracket_term_directional(nu, eta);
    Vec fd = (sys.double_bracket_term(nu + eps * eta) -
              sys.double_bracket_term(nu - eps * eta)) /
             (2.0 * eps);
    worst = std::max(worst, (dn - fd).cwiseAbs().maxCoeff() /
                                std::max(1e-10, dn.cwiseAbs().maxCoeff()));

    auto [gnu, gbeta] = sys.shaped_energy_gradient(nu, beta);
    double dir = sys.d()->pairing(eta, gnu);
    double fdd = (sys.shaped_energy(nu + eps * eta, beta) -
                  sys.shaped_energy(nu - eps * eta, beta)) /
                 (2.0 * eps);
    worst = std::max(worst, std::abs(dir - fdd) / std::max(1e-10, std::abs(dir)));
    double dirb = sys.g()->pairing(zeta, gbeta);
    double fdb = (sys.shaped_energy(nu, beta + eps * zeta) -
                  sys.shaped_energy(nu, beta - eps * zeta)) /
                 (2.0 * eps);
    worst = std::max(worst, std::abs(dirb - fdb) / std::max(1e-10, std::abs(dirb)));
  };

  ControlledSystem sat =
      make_satellite_system(SatelliteParams{}, SatelliteMode::DoubleBracket, +1);
  for (int t = 0; t < 50; ++t) {
    Vec nu(3), eta(3);
    for (int i = 0; i < 3; ++i) {
      nu(i) = d(rng);
      eta(i) = d(rng);
    }
    probe(sat, nu, Vec::Constant(1, d(rng)), eta.normalized(),
          Vec::Constant(1, 1.0));
  }

  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = 8;
  cfg.dealias = false;
  ChannelSystem cs = build_mhd_system(cfg);
  for (int t = 0; t < 50; ++t) {
    Vec nu = cs.nu_e, beta = Vec::Zero(cs.ws->dim());
    Vec eta = Vec::Zero(cs.ws->dim()), zeta = Vec::Zero(cs.ws->dim());
    for (int m = 1; m <= cfg.Nx; ++m)
      for (int n = 1; n <= cfg.Ny; ++n) {
        double decay = std::exp(-0.3 * (m + n));
        nu(cs.ws->index(m, n)) += 0.3 * d(rng) * decay;
        beta(cs.ws->index(m, n)) = 0.1 * d(rng) * decay;
        eta(cs.ws->index(m, n)) = d(rng) * decay;
        zeta(cs.ws->index(m, n)) = d(rng) * decay;
      }
    probe(cs.sys, nu, beta, eta / eta.norm(), zeta / zeta.norm());
  }

  report(8, "finite-difference derivative checks", worst < 1e-6,
         "worst relative error " + fmt(worst));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion7();
  criterion8();
  criterion6();  // the long run last, so quick failures surface first
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
