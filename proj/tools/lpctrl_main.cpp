#include "lpctrl/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Feedback stabilization of Lie-Poisson systems: scenario "
               "runner, structural verification and parameter sweeps"};

  std::string scenario;
  std::string out_dir = "out";
  std::string config_path;
  std::vector<std::string> sets;
  unsigned long long seed = 0;
  bool have_seed = false;
  bool plots = false;

  app.add_option("--scenario", scenario, "satellite | mhd | verify | sweep")
      ->required();
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--set", sets, "override, key=value (repeatable)");
  app.add_option("--seed", seed, "RNG seed (mandatory for verify)")
      ->each([&](const std::string&) { have_seed = true; });
  app.add_flag("--plots", plots, "emit SVG line plots of monitor series");

  CLI11_PARSE(app, argc, argv);

  try {
    lpctrl::RunSpec spec;
    spec.scenario = scenario;
    spec.out_dir = out_dir;
    spec.plots = plots;
    if (have_seed) spec.seed = seed;

    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw lpctrl::ConfigError("cannot read config " + config_path);
      std::stringstream ss;
      ss << is.rdbuf();
      spec.overrides = lpctrl::parse_config_text(ss.str());
    }
    for (const std::string& kv : sets) {
      auto parsed = lpctrl::parse_config_text(kv);
      for (auto& [k, v] : parsed) spec.overrides[k] = v;
    }

    return lpctrl::run(spec);
  } catch (const lpctrl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
