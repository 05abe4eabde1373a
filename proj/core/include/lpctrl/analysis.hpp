#pragma once

#include "lpctrl/closed_loop.hpp"

namespace lpctrl {

/// Casimir candidate rho(K(nu)) built on a registered base Casimir, with the
/// profile and its first two derivatives as callables.
struct CasimirProfile {
  std::string casimir;
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> d2rho;

  /// rho(x) = slope*(x - level) + curvature*(x - level)^2 / 2.
  static CasimirProfile quadratic(std::string casimir, double level,
                                  double slope, double curvature);
  /// rho(x) = slope*x.
  static CasimirProfile linear(std::string casimir, double slope);

  double eval(const AlgebraDescriptor& d, const Vec& nu) const;
  /// Gradient of rho(K(nu)) as an element of d.
  Vec gradient(const AlgebraDescriptor& d, const Vec& nu) const;
};

enum class Definiteness { PositiveDefinite, NegativeDefinite, Indefinite, Degenerate };

const char* definiteness_name(Definiteness d);

struct FirstVariationReport {
  Vec gradient;            // stacked (d, g) legs of D(g_C + K_rho) at z_e
  double gradient_norm = 0.0;
  /// Profile slope at the equilibrium Casimir level that annihilates the
  /// nu-leg when the Casimir gradient is parallel to muC^-1 nu_e.
  double annihilating_slope = 0.0;
  double parallel_residual = 0.0;
};

struct VariationReport {
  double gradient_norm = 0.0;
  Mat hessian;             // over the supplied perturbation basis
  Definiteness classification = Definiteness::Degenerate;
  double margin = 0.0;     // extreme eigenvalue
};

/// Exact gradient of g_C + rho(K(.)) at a Z-chart point.
FirstVariationReport first_variation(const ControlledSystem& sys,
                                     const CasimirProfile& profile,
                                     const State& z_e);

/// Finite-difference Hessian of g_C + rho(K(.)) at z_e over the given
/// perturbation directions (each of length dim_d + dim_g). Central
/// differences at two step sizes with Richardson extrapolation; symmetry
/// enforced by averaging; classification at tolerance 1e-10.
VariationReport second_variation(const ControlledSystem& sys,
                                 const CasimirProfile& profile,
                                 const State& z_e,
                                 const std::vector<Vec>& basis,
                                 double fd_step = 1e-4);

/// Classify a symmetric matrix by its eigenvalues at the given tolerance.
std::pair<Definiteness, double> classify_definiteness(const Mat& hessian,
                                                      double tol = 1e-10);

/// Middle-axis gain threshold I3 (I3 - lambda2) / (i3 lambda2).
double gain_threshold_satellite(double lambda2, double I3, double i3);

/// s * (g_C(z) + K_rho(nu) - g_C(z_e) - K_rho(nu_e)); with s = -1 this is the
/// negative-energy Lyapunov combination used for maxima.
double lyapunov_eval(const ControlledSystem& sys, const CasimirProfile& profile,
                     const State& z, const State& z_e);

}  // namespace lpctrl
