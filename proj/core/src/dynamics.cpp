#include "lpctrl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lpctrl {

void IntegratorConfig::validate() const {
  if (step <= 0.0) throw Error("IntegratorConfig: step must be > 0");
  if (horizon <= 0.0) throw Error("IntegratorConfig: horizon must be > 0");
  if (step >= horizon) throw Error("IntegratorConfig: step must be < horizon");
  if (monitor_stride < 1) throw Error("IntegratorConfig: stride must be >= 1");
}

const std::vector<double>& Trajectory::series(const std::string& name) const {
  for (std::size_t i = 0; i < monitor_names.size(); ++i)
    if (monitor_names[i] == name) return monitors[i];
  throw Error("Trajectory: no monitor series '" + name + "'");
}

namespace {

std::pair<Vec, Vec> rk4_step(const Field& f, const Vec& nu, const Vec& se,
                             double h) {
  auto [k1n, k1s] = f(nu, se);
  auto [k2n, k2s] = f(nu + 0.5 * h * k1n, se + 0.5 * h * k1s);
  auto [k3n, k3s] = f(nu + 0.5 * h * k2n, se + 0.5 * h * k2s);
  auto [k4n, k4s] = f(nu + h * k3n, se + h * k3s);
  return {nu + (h / 6.0) * (k1n + 2.0 * k2n + 2.0 * k3n + k4n),
          se + (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)};
}

std::pair<Vec, Vec> midpoint_step(const Field& f, const Vec& nu, const Vec& se,
                                  const IntegratorConfig& cfg, long index) {
  const double h = cfg.step;
  auto [fn, fs] = f(nu, se);
  Vec yn = nu + h * fn;
  Vec ys = se + h * fs;
  for (int it = 0; it < cfg.implicit_max_iters; ++it) {
    auto [gn, gs] = f(0.5 * (nu + yn), 0.5 * (se + ys));
    Vec zn = nu + h * gn;
    Vec zs = se + h * gs;
    double delta = (zn - yn).cwiseAbs().maxCoeff();
    if (zs.size() > 0) delta = std::max(delta, (zs - ys).cwiseAbs().maxCoeff());
    yn.swap(zn);
    ys.swap(zs);
    if (delta <= cfg.implicit_tol) return {yn, ys};
  }
  throw Error("implicit midpoint: fixed point did not converge at step " +
              std::to_string(index));
}

}  // namespace

std::pair<Vec, Vec> step_once(const Field& field, const Vec& nu,
                              const Vec& second, const IntegratorConfig& config,
                              long step_index) {
  if (config.method == Method::RK4)
    return rk4_step(field, nu, second, config.step);
  return midpoint_step(field, nu, second, config, step_index);
}

Trajectory integrate(const Field& field, const State& z0,
                     const IntegratorConfig& config,
                     const std::vector<Monitor>& monitors) {
  config.validate();
  const long nsteps = std::lround(config.horizon / config.step);

  Trajectory out;
  out.chart = z0.chart;
  for (const Monitor& m : monitors) {
    out.monitor_names.push_back(m.name);
    out.monitors.emplace_back();
  }

  Vec nu = z0.nu.coeffs;
  Vec se = z0.second.coeffs;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.nu.push_back(nu);
    out.second.push_back(se);
    for (std::size_t i = 0; i < monitors.size(); ++i)
      out.monitors[i].push_back(monitors[i].eval(nu, se));
  };

  record(0.0);
  for (long i = 0; i < nsteps; ++i) {
    std::tie(nu, se) = step_once(field, nu, se, config, i);
    if ((i + 1) % config.monitor_stride == 0 || i + 1 == nsteps)
      record((i + 1) * config.step);
  }
  return out;
}

double convergence_order(const Field& field, const State& z0, double horizon,
                         double coarse_step, Method method) {
  auto run = [&](double h) {
    IntegratorConfig cfg;
    cfg.method = method;
    cfg.step = h;
    cfg.horizon = horizon;
    cfg.monitor_stride = std::numeric_limits<int>::max();
    Trajectory t = integrate(field, z0, cfg);
    Vec flat(t.nu.back().size() + t.second.back().size());
    flat << t.nu.back(), t.second.back();
    return flat;
  };
  Vec a = run(coarse_step);
  Vec b = run(coarse_step / 2.0);
  Vec c = run(coarse_step / 4.0);
  double e1 = (a - b).norm();
  double e2 = (b - c).norm();
  if (e2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(e1 / e2);
}

}  // namespace lpctrl
