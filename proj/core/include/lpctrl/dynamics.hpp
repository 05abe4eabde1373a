#pragma once

#include "lpctrl/closed_loop.hpp"

#include <map>

namespace lpctrl {

enum class Method { RK4, ImplicitMidpoint };

struct IntegratorConfig {
  Method method = Method::RK4;
  double step = 1e-3;
  double horizon = 1.0;
  int monitor_stride = 1;
  double implicit_tol = 1e-12;
  int implicit_max_iters = 50;

  void validate() const;
};

/// Right-hand side on a fixed chart: (nu, second) -> (nud, secondd).
using Field = std::function<std::pair<Vec, Vec>(const Vec&, const Vec&)>;

struct Monitor {
  std::string name;
  std::function<double(const Vec&, const Vec&)> eval;
};

/// Time series of states on one chart plus named scalar monitor series, all
/// sharing the same sampling grid.
struct Trajectory {
  Chart chart = Chart::Z;
  std::vector<double> times;
  std::vector<Vec> nu;
  std::vector<Vec> second;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitors;

  const std::vector<double>& series(const std::string& name) const;
  std::size_t samples() const { return times.size(); }
};

/// Fixed-step integration with invariant monitoring. Deterministic: identical
/// configs produce bitwise-identical trajectories on one platform. The
/// implicit midpoint solver aborts with the step index on non-convergence.
Trajectory integrate(const Field& field, const State& z0,
                     const IntegratorConfig& config,
                     const std::vector<Monitor>& monitors = {});

/// Single step of the configured method.
std::pair<Vec, Vec> step_once(const Field& field, const Vec& nu,
                              const Vec& second, const IntegratorConfig& config,
                              long step_index = 0);

/// Observed order from a Richardson triplet (h, h/2, h/4) at the horizon.
double convergence_order(const Field& field, const State& z0, double horizon,
                         double coarse_step, Method method = Method::RK4);

}  // namespace lpctrl
