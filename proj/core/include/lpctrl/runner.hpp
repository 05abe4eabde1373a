#pragma once

#include "lpctrl/mhd2d.hpp"
#include "lpctrl/satellite.hpp"

#include <map>

namespace lpctrl {

struct ConfigError : Error {
  using Error::Error;
};

/// A scenario invocation: which scenario, flat key=value overrides, output
/// directory and the RNG seed (mandatory for verify). Unknown keys are
/// rejected at dispatch.
struct RunSpec {
  std::string scenario;  // satellite | mhd | verify | sweep
  std::map<std::string, std::string> overrides;
  std::string out_dir = "out";
  std::optional<unsigned long long> seed;
  bool plots = false;
};

/// One randomized structural check: named residual against its tolerance.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Randomized structural residual suite over the satellite and an 8x8
/// channel system: interconnection skewness, damping symmetry and signed
/// semidefiniteness, the matching-condition residuals, the local-coordinate
/// equivalence on random instances, the two closed-loop code paths, chart
/// round trips and finite-difference derivative checks.
std::vector<Check> verify_structure(unsigned long long seed,
                                    int states_per_system = 100,
                                    int instances = 50);

struct SweepRow {
  double parameter = 0.0;
  double margin = 0.0;
  bool verdict = false;  // definite / certified at this grid point
};

struct SweepResult {
  std::string parameter;
  std::vector<SweepRow> rows;
  double bracket_low = 0.0;   // verdict flip bracketed in (low, high]
  double bracket_high = 0.0;
  bool flip_found = false;
};

/// Definiteness flip of the middle-axis second variation over a gain grid.
SweepResult sweep_gain(const SatelliteParams& base, double from, double to,
                       double increment);
/// Margin sign change of the channel certificate over a shaping grid.
SweepResult sweep_gamma(const ChannelConfig& base, double from, double to,
                        double increment);

/// Parse "key=value" lines (# comments and blank lines ignored).
std::map<std::string, std::string> parse_config_text(const std::string& text);

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::map<std::string, std::string>& provenance);
void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     const std::map<std::string, std::string>& provenance);
/// Plain-text grid snapshot, row-major, header: Nx Ny L W gamma t.
void write_field_snapshot(const std::string& path, const SpectralWorkspace& ws,
                          const Vec& coeffs, double t);
void write_series_svg(const std::string& path, const std::string& name,
                      const std::vector<double>& times,
                      const std::vector<double>& values);

/// Execute a run spec: writes artifacts into out_dir and returns the exit
/// code (0 all verdicts pass, 1 scenario failure). Bad configuration throws
/// ConfigError (exit 2 at the CLI).
int run(const RunSpec& spec);

}  // namespace lpctrl
