#include "lpctrl/dynamics.hpp"
#include "lpctrl/mhd2d.hpp"
#include "lpctrl/satellite.hpp"

#include <doctest.h>

#include <cstring>

using namespace lpctrl;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

State so3_state(Vec nu, Vec second) {
  static AlgebraPtr so3 = AlgebraDescriptor::so3();
  static AlgebraPtr ab = AlgebraDescriptor::abelian(1);
  return State{DualElement(so3, std::move(nu)), DualElement(ab, std::move(second)),
               Chart::X};
}

}  // namespace

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  cfg.step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.step = 2.0;
  cfg.horizon = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.step = 0.1;
  cfg.monitor_stride = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("zero field keeps the state constant") {
  Field zero = [](const Vec& nu, const Vec& s) {
    return std::make_pair(Vec(Vec::Zero(nu.size())), Vec(Vec::Zero(s.size())));
  };
  IntegratorConfig cfg;
  cfg.step = 0.1;
  cfg.horizon = 1.0;
  Trajectory t = integrate(zero, so3_state(v3(1, 2, 3), Vec::Constant(1, 4.0)), cfg);
  CHECK((t.nu.back() - t.nu.front()).norm() == 0.0);
  CHECK((t.second.back() - t.second.front()).norm() == 0.0);
}

TEST_CASE("linear rotation field integrates at fourth order") {
  // (x, y)' = (-w y, w x); exact solution is a rotation.
  const double w = 3.0;
  Field rot = [w](const Vec& nu, const Vec& s) {
    Vec d(3);
    d << -w * nu(1), w * nu(0), 0.0;
    return std::make_pair(d, Vec(Vec::Zero(s.size())));
  };
  State z0 = so3_state(v3(1, 0, 0), Vec::Zero(1));
  auto error_at = [&](double h) {
    IntegratorConfig cfg;
    cfg.step = h;
    cfg.horizon = 1.0;
    cfg.monitor_stride = 1 << 30;
    Trajectory t = integrate(rot, z0, cfg);
    Vec exact = v3(std::cos(w), std::sin(w), 0.0);
    return (t.nu.back() - exact).norm();
  };
  CHECK(error_at(1e-2) / error_at(5e-3) == doctest::Approx(16.0).epsilon(0.1));
  CHECK(convergence_order(rot, z0, 1.0, 1e-2) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("free rigid body preserves the spin norm over a long horizon") {
  SatelliteParams p;
  KaluzaKlein kk = satellite_kaluza_klein(p);
  Field field = [&kk](const Vec& nu, const Vec& alpha) {
    return kk.free_field(Orientation::Left, nu, alpha);
  };
  double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  State z0 = so3_state(v3(inv_sqrt3, inv_sqrt3, inv_sqrt3), Vec::Zero(1));
  IntegratorConfig cfg;
  cfg.step = 1e-3;
  cfg.horizon = 100.0;
  cfg.monitor_stride = 1 << 30;
  Trajectory t = integrate(field, z0, cfg);
  CHECK(std::abs(t.nu.back().norm() - 1.0) < 1e-10);
}

TEST_CASE("controlled satellite flow converges at fourth order") {
  ControlledSystem sys =
      make_satellite_system(SatelliteParams{}, SatelliteMode::DoubleBracket, +1);
  Field field = [&sys](const Vec& nu, const Vec& beta) {
    return sys.closed_loop_field(nu, beta);
  };
  State z0 = so3_state(v3(0.3, 1.0, -0.2), Vec::Constant(1, 0.1));
  double order = convergence_order(field, z0, 2.0, 2e-2);
  CHECK(order == doctest::Approx(4.0).epsilon(0.075));  // 4 +- 0.3

  // Halving the step shrinks the terminal error by about 16.
  auto terminal = [&](double h) {
    IntegratorConfig cfg;
    cfg.step = h;
    cfg.horizon = 2.0;
    cfg.monitor_stride = 1 << 30;
    Trajectory t = integrate(field, z0, cfg);
    Vec flat(4);
    flat << t.nu.back(), t.second.back();
    return flat;
  };
  Vec ref = terminal(1e-3);
  double e1 = (terminal(1.6e-2) - ref).norm();
  double e2 = (terminal(8e-3) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("coarse channel flow converges at fourth order") {
  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = 8;
  ChannelSystem cs = build_mhd_system(cfg);
  Field field = [&cs](const Vec& nu, const Vec& beta) {
    return cs.sys.closed_loop_field(nu, beta);
  };
  Vec nu0 = cs.nu_e;
  nu0(cs.ws->index(1, 1)) += 0.05;
  nu0(cs.ws->index(2, 1)) += 0.03;
  State z0 = cs.sys.make_state(nu0, Vec::Zero(cs.ws->dim()), Chart::Z);
  double order = convergence_order(field, z0, 1.0, 5e-2);
  CHECK(order == doctest::Approx(4.0).epsilon(0.125));  // 4 +- 0.5
}

TEST_CASE("implicit midpoint conserves quadratic invariants exactly") {
  SatelliteParams p;
  KaluzaKlein kk = satellite_kaluza_klein(p);
  Field field = [&kk](const Vec& nu, const Vec& alpha) {
    return kk.free_field(Orientation::Left, nu, alpha);
  };
  State z0 = so3_state(v3(0.6, 0.7, 0.38), Vec::Zero(1));
  IntegratorConfig cfg;
  cfg.method = Method::ImplicitMidpoint;
  cfg.step = 1e-2;
  cfg.horizon = 10.0;
  cfg.monitor_stride = 100;
  Trajectory t = integrate(field, z0, cfg);
  for (const Vec& nu : t.nu)
    CHECK(std::abs(nu.squaredNorm() - z0.nu.coeffs.squaredNorm()) <= 1e-11);
}

TEST_CASE("implicit solver aborts with the step index") {
  Field stiff = [](const Vec& nu, const Vec& s) {
    return std::make_pair(Vec(-1e9 * nu), Vec(Vec::Zero(s.size())));
  };
  IntegratorConfig cfg;
  cfg.method = Method::ImplicitMidpoint;
  cfg.step = 1.0;
  cfg.horizon = 10.0;
  State z0 = so3_state(v3(1, 0, 0), Vec::Zero(1));
  CHECK_THROWS_WITH_AS(integrate(stiff, z0, cfg),
                       doctest::Contains("at step 0"), Error);
}

TEST_CASE("identical configs give bitwise-identical trajectories") {
  ControlledSystem sys =
      make_satellite_system(SatelliteParams{}, SatelliteMode::DoubleBracket, +1);
  Field field = [&sys](const Vec& nu, const Vec& beta) {
    return sys.closed_loop_field(nu, beta);
  };
  State z0 = so3_state(v3(0.3, 1.0, -0.2), Vec::Constant(1, 0.1));
  IntegratorConfig cfg;
  cfg.step = 1e-3;
  cfg.horizon = 1.0;
  cfg.monitor_stride = 10;
  Trajectory a = integrate(field, z0, cfg);
  Trajectory b = integrate(field, z0, cfg);
  REQUIRE(a.samples() == b.samples());
  for (std::size_t i = 0; i < a.samples(); ++i) {
    CHECK(std::memcmp(a.nu[i].data(), b.nu[i].data(),
                      sizeof(double) * a.nu[i].size()) == 0);
    CHECK(std::memcmp(a.second[i].data(), b.second[i].data(),
                      sizeof(double) * a.second[i].size()) == 0);
  }
}
