#include "lpctrl/runner.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace lpctrl {

namespace {

using nlohmann::json;

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec randn(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

Mat randm(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> d(0.0, 1.0);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

Mat rand_spd(std::mt19937_64& rng, int n) {
  Mat a = randm(rng, n, n);
  return a.transpose() * a + static_cast<double>(n) * Mat::Identity(n, n);
}

double pair_p(const ControlledSystem& sys, const std::pair<Vec, Vec>& dual,
              const Vec& v, const Vec& Y) {
  return sys.d()->pairing(dual.first, v) + sys.g()->pairing(dual.second, Y);
}

struct CheckSet {
  std::vector<Check> checks;
  void add(const std::string& name, double residual, double tol) {
    checks.push_back({name, residual, tol, residual <= tol});
  }
  void add_bool(const std::string& name, bool ok, double residual, double tol) {
    checks.push_back({name, residual, tol, ok});
  }
};

// Random but tame channel state: band modes with spectral decay around the
// shaped equilibrium, plus a random fiber leg.
Vec random_channel_band(std::mt19937_64& rng, const SpectralWorkspace& ws,
                        double scale) {
  const ChannelConfig& cfg = ws.config();
  Vec v = Vec::Zero(ws.dim());
  std::normal_distribution<double> d(0.0, 1.0);
  for (int m = 1; m <= cfg.Nx; ++m)
    for (int n = 1; n <= cfg.Ny; ++n)
      v(ws.index(m, n)) = scale * d(rng) * std::exp(-0.35 * (m + n));
  return v;
}

void structural_checks_for(CheckSet& out, const std::string& tag,
                           const ControlledSystem& sys,
                           const std::vector<std::pair<Vec, Vec>>& states,
                           std::mt19937_64& rng) {
  const int nd = sys.d()->dim();
  const int ng = sys.g()->dim();
  const bool fluid = !sys.d()->coefficient_pairing();

  double skew = 0.0, sym = 0.0, semidef = 0.0;
  double two_paths = 0.0, roundtrip = 0.0, pushforward = 0.0;
  double dn_fd = 0.0, grad_fd = 0.0, duality = 0.0, rate_consistency = 0.0;

  auto rand_dir = [&](int n) {
    Vec v = randn(rng, n);
    return Vec(v / v.norm());
  };

  for (const auto& [nu, beta] : states) {
    Vec v = rand_dir(nd), w = rand_dir(nd);
    Vec Y = rand_dir(ng), Z = rand_dir(ng);
    if (fluid) {
      v(nd - 1) = 0.0;
      w(nd - 1) = 0.0;
      Y(ng - 1) = 0.0;
      Z(ng - 1) = 0.0;
    }

    auto pi_ab = pair_p(sys, sys.interconnection_apply(nu, v, Y), w, Z);
    auto pi_ba = pair_p(sys, sys.interconnection_apply(nu, w, Z), v, Y);
    skew = std::max(skew, std::abs(pi_ab + pi_ba));

    auto r_ab = pair_p(sys, sys.damping_apply(nu, v, Y), w, Z);
    auto r_ba = pair_p(sys, sys.damping_apply(nu, w, Z), v, Y);
    sym = std::max(sym, std::abs(r_ab - r_ba));
    double raa = sys.s() * pair_p(sys, sys.damping_apply(nu, v, Y), v, Y);
    semidef = std::min(semidef, raa);

    auto [f1n, f1b] = sys.closed_loop_field(nu, beta);
    auto [f2n, f2b] = sys.closed_loop_field_tensor(nu, beta);
    two_paths = std::max(two_paths, (f1n - f2n).cwiseAbs().maxCoeff());
    two_paths = std::max(two_paths, (f1b - f2b).cwiseAbs().maxCoeff());

    Vec alpha = sys.phi_inverse(nu, beta);
    Vec beta2 = sys.phi_forward(nu, alpha);
    roundtrip = std::max(roundtrip, (beta2 - beta).cwiseAbs().maxCoeff());

    // Pointwise equivalence of the two controlled forms: push the x-chart
    // field through the exact chart tangent, compare with the closed loop.
    auto [xn, xa] = sys.controlled_field(nu, alpha);
    auto [pn, pb] = sys.phi_tangent(nu, xn, xa);
    pushforward = std::max(pushforward, (pn - f1n).cwiseAbs().maxCoeff());
    pushforward = std::max(pushforward, (pb - f1b).cwiseAbs().maxCoeff());

    // Finite-difference oracles at eps = 1e-5.
    const double eps = 1e-5;
    Vec eta = rand_dir(nd);
    if (fluid) eta(nd - 1) = 0.0;
    Vec dn = sys.double_bracket_term_directional(nu, eta);
    Vec dn_num = (sys.double_bracket_term(nu + eps * eta) -
                  sys.double_bracket_term(nu - eps * eta)) /
                 (2.0 * eps);
    double dnorm = std::max(dn.cwiseAbs().maxCoeff(), 1e-8);
    dn_fd = std::max(dn_fd, (dn - dn_num).cwiseAbs().maxCoeff() / dnorm);

    auto [gnu, gbeta] = sys.shaped_energy_gradient(nu, beta);
    double dir_nu = sys.d()->pairing(eta, gnu);
    double fd_nu = (sys.shaped_energy(nu + eps * eta, beta) -
                    sys.shaped_energy(nu - eps * eta, beta)) /
                   (2.0 * eps);
    Vec zeta = rand_dir(ng);
    if (fluid) zeta(ng - 1) = 0.0;
    double dir_b = sys.g()->pairing(zeta, gbeta);
    double fd_b = (sys.shaped_energy(nu, beta + eps * zeta) -
                   sys.shaped_energy(nu, beta - eps * zeta)) /
                  (2.0 * eps);
    double gscale = std::max({std::abs(dir_nu), std::abs(dir_b), 1e-8});
    grad_fd = std::max(grad_fd, std::abs(dir_nu - fd_nu) / gscale);
    grad_fd = std::max(grad_fd, std::abs(dir_b - fd_b) / gscale);

    // Coadjoint duality <coad(u,nu), w> = <nu, ad(u,w)>.
    double lhs = sys.d()->pairing(sys.d()->coad(v, nu), w);
    double rhs = sys.d()->pairing(nu, sys.d()->bracket(v, w));
    duality = std::max(duality, std::abs(lhs - rhs));

    // Directional derivative of the shaped energy equals the rate formula.
    auto [num, bdot] = sys.closed_loop_field(nu, beta);
    double ddir = sys.d()->pairing(num, gnu) + sys.g()->pairing(bdot, gbeta);
    double rate = sys.energy_rate(nu, beta);
    rate_consistency = std::max(
        rate_consistency, std::abs(ddir - rate) / std::max(1.0, std::abs(rate)));
  }

  out.add(tag + ".interconnection_skew", skew, 1e-12);
  out.add(tag + ".damping_symmetry", sym, 1e-12);
  out.add_bool(tag + ".damping_semidefinite", semidef >= -1e-12, -semidef, 1e-12);
  out.add(tag + ".closed_loop_two_paths", two_paths, 1e-12);
  out.add(tag + ".chart_roundtrip", roundtrip, 1e-12);
  out.add(tag + ".pushforward_equivalence", pushforward, 1e-10);
  out.add(tag + ".shaping_term_derivative_fd", dn_fd, 1e-6);
  out.add(tag + ".shaped_energy_gradient_fd", grad_fd, 1e-6);
  out.add(tag + ".coadjoint_duality", duality, 5e-12);
  out.add(tag + ".rate_directional_consistency", rate_consistency, 1e-10);
}

}  // namespace

std::vector<Check> verify_structure(unsigned long long seed,
                                    int states_per_system, int instances) {
  std::mt19937_64 rng(seed);
  CheckSet out;

  // Satellite, double-bracket route at the default desk parameters.
  SatelliteParams sp;
  ControlledSystem sat = make_satellite_system(sp, SatelliteMode::DoubleBracket, +1);
  std::vector<std::pair<Vec, Vec>> sat_states;
  for (int i = 0; i < states_per_system; ++i)
    sat_states.emplace_back(randn(rng, 3), randn(rng, 1));
  structural_checks_for(out, "satellite", sat, sat_states, rng);

  // Channel model at 8x8 modes.
  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = 8;
  cfg.dealias = false;
  ChannelSystem cs = build_mhd_system(cfg);
  std::vector<std::pair<Vec, Vec>> mhd_states;
  for (int i = 0; i < states_per_system; ++i) {
    Vec nu = cs.nu_e + random_channel_band(rng, *cs.ws, 0.5);
    Vec beta = random_channel_band(rng, *cs.ws, 0.2);
    mhd_states.emplace_back(std::move(nu), std::move(beta));
  }
  structural_checks_for(out, "mhd8", cs.sys, mhd_states, rng);

  // Matched satellite gains: the matching-condition residuals.
  ControlledSystem matched = make_satellite_system(sp, SatelliteMode::Matched, +1);
  auto [lp1, lp2] = check_lp_conditions(matched.kk(), matched.matched_structure());
  out.add("satellite.matching_first", lp1, 1e-10);
  out.add("satellite.matching_second", lp2, 1e-10);

  // Local-coordinate equivalence on random finite-dimensional instances.
  {
    double matched_res = 0.0;
    double recovery = 0.0;
    double detect = std::numeric_limits<double>::infinity();
    std::uniform_int_distribution<int> dim_d(3, 6), dim_g(1, 3);
    for (int i = 0; i < instances; ++i) {
      int nd = dim_d(rng), ng = dim_g(rng);
      AlgebraPtr d = AlgebraDescriptor::abelian(nd, "d");
      AlgebraPtr g = AlgebraDescriptor::abelian(ng, "g");
      KaluzaKlein kk(d, g,
                     LinearMap::dense(Space::D, Space::DStar, rand_spd(rng, nd)),
                     LinearMap::dense(Space::G, Space::GStar, rand_spd(rng, ng)),
                     LinearMap::dense(Space::D, Space::G, randm(rng, ng, nd)));
      // A matched triple by construction: I_C > I0 keeps everything definite.
      Mat icm = kk.I0().matrix() + rand_spd(rng, ng);
      LinearMap IC = LinearMap::dense(Space::G, Space::GStar, icm);
      LinearMap AC = IC.inverse().compose(kk.I0()).compose(kk.A0());
      Mat muc = kk.mu0().matrix() +
                kk.A0_adj().compose(kk.I0()).compose(kk.A0()).matrix() -
                AC.adjoint().compose(IC).compose(AC).matrix();
      MatchedStructure ms{LinearMap::dense(Space::D, Space::DStar, muc), IC, AC};

      auto [r1, r2] = check_lp_conditions(kk, ms);
      EPData ep = ep_from_lp(kk, ms);
      EPResiduals er = ep_residuals(kk, ms, ep);
      matched_res = std::max({matched_res, r1, r2, er.first, er.second, er.metric});

      // Gains recovered from the structure must regenerate it.
      GainSet gains = gain_from_structure(kk, ms);
      MatchOutcome mo = match_structure(kk, gains);
      if (!mo.ok) {
        recovery = std::numeric_limits<double>::infinity();
      } else {
        recovery = std::max(
            recovery,
            operator_norm(mo.structure.muC.subtract(ms.muC)));
        recovery = std::max(
            recovery, operator_norm(mo.structure.IC.subtract(ms.IC)));
        recovery = std::max(
            recovery, operator_norm(mo.structure.AC.subtract(ms.AC)));
      }

      // Perturbing tau must violate both formulations at once.
      const double eps = 1e-3;
      EPData bad = ep;
      bad.tau = ep.tau.add(LinearMap::dense(Space::D, Space::G,
                                            eps * randm(rng, ng, nd)));
      MatchedStructure bad_ms = lp_from_ep(kk, bad);
      auto [b1, b2] = check_lp_conditions(kk, bad_ms);
      EPResiduals ber = ep_residuals(kk, bad_ms, bad);
      detect = std::min(detect, std::max(b1, b2) / eps);
      detect = std::min(detect, std::max(ber.first, ber.metric) / eps);
    }
    out.add("ep_lp.matched_residuals", matched_res, 1e-10);
    out.add("ep_lp.gain_recovery", recovery, 1e-10);
    out.add_bool("ep_lp.perturbation_detected", detect > 1e-2, detect, 1e-2);
  }

  // Symmetric double bracket: positivity and Casimir degeneracy.
  {
    double min_ff = std::numeric_limits<double>::infinity();
    double casimir_res = 0.0;
    for (int i = 0; i < 20; ++i) {
      Vec nu = randn(rng, 3);
      Vec gf = randn(rng, 3), gh = randn(rng, 3);
      Observable f{nullptr, [gf](const Vec&) { return gf; }};
      Observable h{nullptr, [gh](const Vec&) { return gh; }};
      min_ff = std::min(min_ff, sat.symmetric_bracket(f, f, nu));
      Observable cas{nullptr, [](const Vec& x) { return Vec(x); }};
      casimir_res = std::max(casimir_res,
                             std::abs(sat.symmetric_bracket(cas, h, nu)));
    }
    out.add_bool("satellite.symmetric_bracket_psd", min_ff >= -1e-12, -min_ff,
                 1e-12);
    out.add("satellite.symmetric_bracket_casimir", casimir_res, 1e-12);
  }

  return out.checks;
}

SweepResult sweep_gain(const SatelliteParams& base, double from, double to,
                       double increment) {
  if (increment <= 0.0 || to < from) throw ConfigError("sweep: empty grid");
  SweepResult res;
  res.parameter = "k";
  CasimirProfile profile = CasimirProfile::quadratic(
      "spin_sq_half", 0.5, -1.0 / base.lambda2, 1.0);
  std::vector<Vec> basis;
  for (int i = 0; i < 4; ++i) basis.push_back(Vec::Unit(4, i));

  for (double k = from; k <= to + 1e-12; k += increment) {
    SatelliteParams p = base;
    p.k = k;
    ControlledSystem sys = make_satellite_system(p, SatelliteMode::DoubleBracket, +1);
    State ze = sys.make_state(Vec::Unit(3, 1), Vec::Zero(1), Chart::Z);
    VariationReport vr = second_variation(sys, profile, ze, basis);
    SweepRow row;
    row.parameter = k;
    row.margin = vr.margin;
    row.verdict = vr.classification == Definiteness::PositiveDefinite;
    res.rows.push_back(row);
  }
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    if (res.rows[i].verdict != res.rows[i - 1].verdict && !res.flip_found) {
      res.flip_found = true;
      res.bracket_low = res.rows[i - 1].parameter;
      res.bracket_high = res.rows[i].parameter;
    }
  }
  return res;
}

SweepResult sweep_gamma(const ChannelConfig& base, double from, double to,
                        double increment) {
  if (increment <= 0.0 || to < from) throw ConfigError("sweep: empty grid");
  SweepResult res;
  res.parameter = "gamma";
  for (double g = from; g <= to + 1e-12; g += increment) {
    ChannelConfig cfg = base;
    cfg.gamma = g;
    MarginReport mr = stability_margin(cfg);
    SweepRow row;
    row.parameter = g;
    row.margin = mr.controlled;
    row.verdict = mr.controlled > 0.0;
    res.rows.push_back(row);
  }
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    if (res.rows[i].verdict != res.rows[i - 1].verdict && !res.flip_found) {
      res.flip_found = true;
      res.bracket_low = res.rows[i - 1].parameter;
      res.bracket_high = res.rows[i].parameter;
    }
  }
  return res;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line is not key=value: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string s) {
      std::size_t x = s.find_first_not_of(" \t");
      std::size_t y = s.find_last_not_of(" \t");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    out[strip(key)] = strip(value);
  }
  return out;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::map<std::string, std::string>& provenance) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  for (const auto& [k, v] : provenance) os << "# " << k << "=" << v << "\n";
  os << "t";
  for (int i = 0; i < traj.nu.front().size(); ++i) os << ",nu_" << i;
  for (int i = 0; i < traj.second.front().size(); ++i) os << ",second_" << i;
  for (const std::string& name : traj.monitor_names) os << "," << name;
  os << "\n";
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    os << fmt_g(traj.times[s]);
    for (int i = 0; i < traj.nu[s].size(); ++i) os << "," << fmt_g(traj.nu[s](i));
    for (int i = 0; i < traj.second[s].size(); ++i)
      os << "," << fmt_g(traj.second[s](i));
    for (const auto& series : traj.monitors) os << "," << fmt_g(series[s]);
    os << "\n";
  }
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     const std::map<std::string, std::string>& provenance) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  for (const auto& [k, v] : provenance) os << "# " << k << "=" << v << "\n";
  os << sweep.parameter << ",margin,verdict\n";
  for (const SweepRow& row : sweep.rows)
    os << fmt_g(row.parameter) << "," << fmt_g(row.margin) << ","
       << (row.verdict ? 1 : 0) << "\n";
}

void write_field_snapshot(const std::string& path, const SpectralWorkspace& ws,
                          const Vec& coeffs, double t) {
  const ChannelConfig& cfg = ws.config();
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os << "# Nx Ny L W gamma t\n";
  os << cfg.Nx << " " << cfg.Ny << " " << fmt_g(cfg.L) << " " << fmt_g(cfg.W)
     << " " << fmt_g(cfg.gamma) << " " << fmt_g(t) << "\n";
  Mat v = ws.values_on_grid(coeffs, cfg.Nx, cfg.Ny);
  for (int i = 0; i < v.rows(); ++i) {
    for (int j = 0; j < v.cols(); ++j) {
      if (j) os << " ";
      os << fmt_g(v(i, j));
    }
    os << "\n";
  }
}

void write_series_svg(const std::string& path, const std::string& name,
                      const std::vector<double>& times,
                      const std::vector<double>& values) {
  if (times.empty() || times.size() != values.size())
    throw Error("write_series_svg: bad series");
  const double w = 640.0, h = 360.0, pad = 40.0;
  double tmin = times.front(), tmax = times.back();
  double vmin = values[0], vmax = values[0];
  for (double v : values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmax == vmin) vmax = vmin + 1.0;
  if (tmax == tmin) tmax = tmin + 1.0;
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"20\" font-size=\"14\">" << name
     << "</text>\n<polyline fill=\"none\" stroke=\"black\" points=\"";
  for (std::size_t i = 0; i < times.size(); ++i) {
    double x = pad + (times[i] - tmin) / (tmax - tmin) * (w - 2 * pad);
    double y = h - pad - (values[i] - vmin) / (vmax - vmin) * (h - 2 * pad);
    os << fmt_g(x) << "," << fmt_g(y) << " ";
  }
  os << "\"/>\n</svg>\n";
}

namespace {

/// Typed override access with unknown-key rejection.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value for '" + key + "': " + it->second);
    }
  }

  long integer(const std::string& key, long fallback) {
    double v = number(key, static_cast<double>(fallback));
    long r = std::lround(v);
    if (std::abs(v - r) > 1e-9)
      throw ConfigError("expected integer for '" + key + "'");
    return r;
  }

  bool flag(const std::string& key, bool fallback) {
    seen_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("bad boolean for '" + key + "': " + it->second);
  }

  std::string text(const std::string& key, std::string fallback) {
    seen_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!seen_.count(k)) throw ConfigError("unknown key '" + k + "'");
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> seen_;
};

json check_to_json(const Check& c) {
  return json{{"name", c.name},
              {"residual", c.residual},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os << j.dump(2) << "\n";
}

IntegratorConfig integrator_from(Params& p, double horizon, double step,
                                 long stride) {
  IntegratorConfig cfg;
  cfg.horizon = p.number("horizon", horizon);
  cfg.step = p.number("step", step);
  cfg.monitor_stride = static_cast<int>(p.integer("stride", stride));
  std::string method = p.text("method", "rk4");
  if (method == "rk4") {
    cfg.method = Method::RK4;
  } else if (method == "midpoint") {
    cfg.method = Method::ImplicitMidpoint;
  } else {
    throw ConfigError("unknown method '" + method + "'");
  }
  return cfg;
}

std::map<std::string, std::string> provenance_of(const RunSpec& spec,
                                                 const Params&) {
  std::map<std::string, std::string> prov;
  prov["scenario"] = spec.scenario;
  for (const auto& [k, v] : spec.overrides) prov["set." + k] = v;
  if (spec.seed) prov["seed"] = std::to_string(*spec.seed);
  return prov;
}

int run_satellite(const RunSpec& spec) {
  Params p(spec.overrides);
  SatelliteParams sp;
  sp.lambda1 = p.number("lambda1", 1.0);
  sp.lambda2 = p.number("lambda2", 2.0);
  sp.I3 = p.number("I3", 3.0);
  sp.i3 = p.number("i3", 1.0);
  sp.k = p.number("k", 2.0);
  double perturbation = p.number("perturbation", 1e-2);
  double curvature = p.number("curvature", 1.0);
  IntegratorConfig cfg = integrator_from(p, 200.0, 1e-3, 100);
  p.reject_unknown();

  ScenarioReport rep = run_middle_axis_scenario(sp, perturbation, cfg, curvature);

  std::map<std::string, std::string> prov = provenance_of(spec, p);
  std::filesystem::create_directories(spec.out_dir);
  write_trajectory_csv(spec.out_dir + "/trajectory.csv", rep.trajectory, prov);
  if (spec.plots) {
    for (std::size_t i = 0; i < rep.trajectory.monitor_names.size(); ++i)
      write_series_svg(spec.out_dir + "/" + rep.trajectory.monitor_names[i] + ".svg",
                       rep.trajectory.monitor_names[i], rep.trajectory.times,
                       rep.trajectory.monitors[i]);
  }

  json j{{"scenario", "satellite"},
         {"gain", sp.k},
         {"gain_threshold", sp.gain_threshold()},
         {"perturbation", perturbation},
         {"stable", rep.stable},
         {"diverged", rep.diverged},
         {"verdict", rep.stable ? "stable" : rep.verdict},
         {"lyapunov_violations", rep.lyapunov_violations},
         {"terminal_axis_distance", rep.terminal_axis_distance},
         {"max_axis_distance", rep.max_axis_distance},
         {"terminal_shaping_norm", rep.terminal_shaping_norm},
         {"terminal_fiber_norm", rep.terminal_fiber_norm},
         {"initial_spin_norm", rep.initial_spin_norm},
         {"terminal_spin_norm", rep.terminal_spin_norm}};
  write_json(spec.out_dir + "/report.json", j);
  if (!rep.stable) {
    std::fprintf(stderr, "satellite: %s\n", rep.verdict.c_str());
    return 1;
  }
  return 0;
}

int run_mhd(const RunSpec& spec) {
  Params p(spec.overrides);
  ChannelConfig cc;
  cc.L = p.number("L", 2.0);
  cc.W = p.number("W", 2.0);
  cc.gamma = p.number("gamma", 0.8);
  cc.e = p.number("e", 1.0);
  cc.Nx = static_cast<int>(p.integer("Nx", 24));
  cc.Ny = static_cast<int>(p.integer("Ny", 24));
  cc.dealias = p.flag("dealias", true);
  double amplitude = p.number("amplitude", 1e-2);
  int mode_m = static_cast<int>(p.integer("mode_m", 1));
  int mode_n = static_cast<int>(p.integer("mode_n", 1));
  IntegratorConfig cfg = integrator_from(p, 50.0, 1e-3, 100);
  p.reject_unknown();

  MhdScenarioReport rep = run_shear_scenario(cc, amplitude, mode_m, mode_n, cfg);

  std::map<std::string, std::string> prov = provenance_of(spec, p);
  std::filesystem::create_directories(spec.out_dir);
  write_trajectory_csv(spec.out_dir + "/trajectory.csv", rep.controlled, prov);
  write_trajectory_csv(spec.out_dir + "/uncontrolled.csv", rep.uncontrolled, prov);
  {
    ChannelSystem cs = build_mhd_system(cc);
    write_field_snapshot(spec.out_dir + "/omega_final.txt", *cs.ws,
                         rep.controlled.nu.back(), rep.controlled.times.back());
  }
  if (spec.plots) {
    for (std::size_t i = 0; i < rep.controlled.monitor_names.size(); ++i)
      write_series_svg(spec.out_dir + "/" + rep.controlled.monitor_names[i] + ".svg",
                       rep.controlled.monitor_names[i], rep.controlled.times,
                       rep.controlled.monitors[i]);
  }

  json j{{"scenario", "mhd"},
         {"gamma", cc.gamma},
         {"modes", {cc.Nx, cc.Ny}},
         {"amplitude", amplitude},
         {"certified", rep.certified},
         {"stable", rep.stable},
         {"verdict", rep.stable ? "stable" : rep.verdict},
         {"controlled_margin", rep.controlled_margin},
         {"uncontrolled_margin", rep.uncontrolled_margin},
         {"lyapunov_violations", rep.lyapunov_violations},
         {"uncontrolled_growth", rep.uncontrolled_growth},
         {"enstrophy_drift", rep.enstrophy_drift},
         {"terminal_shaping_norm", rep.terminal_shaping_norm},
         {"terminal_field_norm", rep.terminal_field_norm},
         {"max_perturbation_sup", rep.max_perturbation_sup},
         {"h1_perturbation_terminal", rep.h1_perturbation_terminal},
         {"h1_weighting", rep.h1_weighting}};
  write_json(spec.out_dir + "/report.json", j);
  if (!rep.stable) {
    std::fprintf(stderr, "mhd: %s\n", rep.verdict.c_str());
    return 1;
  }
  return 0;
}

int run_verify(const RunSpec& spec) {
  if (!spec.seed) throw ConfigError("verify: seed is mandatory");
  Params p(spec.overrides);
  int states = static_cast<int>(p.integer("states", 100));
  int instances = static_cast<int>(p.integer("instances", 50));
  p.reject_unknown();

  std::vector<Check> checks = verify_structure(*spec.seed, states, instances);
  bool all = true;
  json arr = json::array();
  for (const Check& c : checks) {
    all = all && c.pass;
    std::printf("%-45s %-4s residual=%.3e tol=%.1e\n", c.name.c_str(),
                c.pass ? "ok" : "FAIL", c.residual, c.tolerance);
    arr.push_back(check_to_json(c));
  }
  std::filesystem::create_directories(spec.out_dir);
  write_json(spec.out_dir + "/report.json",
             json{{"scenario", "verify"},
                  {"seed", *spec.seed},
                  {"pass", all},
                  {"checks", arr}});
  return all ? 0 : 1;
}

int run_sweep(const RunSpec& spec) {
  Params p(spec.overrides);
  std::string parameter = p.text("parameter", "k");
  SweepResult sweep;
  if (parameter == "k") {
    SatelliteParams sp;
    sp.lambda1 = p.number("lambda1", 1.0);
    sp.lambda2 = p.number("lambda2", 2.0);
    sp.I3 = p.number("I3", 3.0);
    sp.i3 = p.number("i3", 1.0);
    double from = p.number("from", 0.0);
    double to = p.number("to", 3.0);
    double inc = p.number("increment", 0.1);
    p.reject_unknown();
    sweep = sweep_gain(sp, from, to, inc);
  } else if (parameter == "gamma") {
    ChannelConfig cc;
    cc.L = p.number("L", 2.0);
    cc.W = p.number("W", 2.0);
    double from = p.number("from", 0.0);
    double to = p.number("to", 0.9);
    double inc = p.number("increment", 0.1);
    p.reject_unknown();
    sweep = sweep_gamma(cc, from, to, inc);
  } else {
    throw ConfigError("sweep: unknown parameter '" + parameter + "'");
  }

  std::map<std::string, std::string> prov = provenance_of(spec, p);
  std::filesystem::create_directories(spec.out_dir);
  write_sweep_csv(spec.out_dir + "/sweep.csv", sweep, prov);
  write_json(spec.out_dir + "/report.json",
             json{{"scenario", "sweep"},
                  {"parameter", sweep.parameter},
                  {"flip_found", sweep.flip_found},
                  {"bracket_low", sweep.bracket_low},
                  {"bracket_high", sweep.bracket_high}});
  if (!sweep.flip_found) {
    std::fprintf(stderr, "sweep: no verdict flip inside the grid\n");
    return 1;
  }
  return 0;
}

}  // namespace

int run(const RunSpec& spec) {
  if (spec.scenario == "satellite") return run_satellite(spec);
  if (spec.scenario == "mhd") return run_mhd(spec);
  if (spec.scenario == "verify") return run_verify(spec);
  if (spec.scenario == "sweep") return run_sweep(spec);
  throw ConfigError("unknown scenario '" + spec.scenario + "'");
}

}  // namespace lpctrl
