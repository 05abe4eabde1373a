#pragma once

#include "lpctrl/analysis.hpp"
#include "lpctrl/dynamics.hpp"

namespace lpctrl {

/// Carrier-plus-rotor inertia data. lambda_j = I_j + i_j are the locked
/// moments about the transverse axes; the rotor sits on the third axis.
struct SatelliteParams {
  double lambda1 = 1.0;
  double lambda2 = 2.0;
  double I3 = 3.0;
  double i3 = 1.0;
  double k = 2.0;  // feedback gain

  void validate() const;  // 0 < lambda1 < lambda2 < I3, k i3/I3 > -1
  double gain_threshold() const;
};

enum class SatelliteMode { Matched, DoubleBracket };

/// Kaluza-Klein data of the satellite: mu0 = diag(lambda1, lambda2, I3),
/// I0 = i3, A0 = projection onto the third body axis.
KaluzaKlein satellite_kaluza_klein(const SatelliteParams& p);

/// Fully assembled controlled system. Matched mode uses the matching gains
/// (G from the matching bullet); double-bracket mode uses G = 1 and
/// C = k I0 A0 mu0^-1. Body representation, so the orientation is Left.
ControlledSystem make_satellite_system(const SatelliteParams& p,
                                       SatelliteMode mode, int s = +1);

/// Closed-form diagonal of the second variation of g_C + K_rho at the
/// middle-axis equilibrium, over (dnu1, dnu2, dnu3, dbeta).
Vec middle_axis_hessian_diagonal(const SatelliteParams& p, double curvature,
                                 int s);

struct ScenarioReport {
  bool stable = false;
  bool diverged = false;
  long lyapunov_violations = 0;       // increases of L above 1e-12
  double terminal_axis_distance = 0.0;
  double max_axis_distance = 0.0;
  double terminal_shaping_norm = 0.0;  // |N(nu)| at the horizon
  double terminal_fiber_norm = 0.0;    // |beta| at the horizon
  double initial_spin_norm = 0.0;      // |nu(0)|
  double terminal_spin_norm = 0.0;     // |nu(T)|
  Trajectory trajectory;
  std::string verdict;  // first violated criterion, empty when stable
};

/// Middle-axis stabilization run. Perturbs the equilibrium (e2, 0) by the
/// given amount in nu1, nu3 and beta, integrates the closed loop and checks
/// monotonicity of the Lyapunov function, convergence to the axis
/// {R e2} x {0}, and spin-sphere preservation. With k = 0 the free system is
/// integrated instead and instability is the expected outcome.
ScenarioReport run_middle_axis_scenario(const SatelliteParams& p,
                                        double perturbation,
                                        const IntegratorConfig& config,
                                        double curvature = 1.0);

}  // namespace lpctrl
