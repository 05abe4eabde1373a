#include "lpctrl/mhd2d.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lpctrl;

namespace {

Vec random_state(std::mt19937_64& rng, const SpectralWorkspace& ws, double chi) {
  std::normal_distribution<double> d(0.0, 1.0);
  const ChannelConfig& cfg = ws.config();
  Vec v = Vec::Zero(ws.dim());
  for (int m = 1; m <= cfg.Nx; ++m)
    for (int n = 1; n <= cfg.Ny; ++n)
      v(ws.index(m, n)) = d(rng) * std::exp(-0.2 * (m + n));
  v(ws.chi_index()) = chi;
  return v;
}

void BM_Advect(benchmark::State& state) {
  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = static_cast<int>(state.range(0));
  SpectralWorkspace ws(cfg);
  std::mt19937_64 rng(1);
  Vec u = random_state(rng, ws, 1.0);
  Vec nu = random_state(rng, ws, -0.2);
  for (auto _ : state) benchmark::DoNotOptimize(ws.coad(u, nu));
  state.SetItemsProcessed(state.iterations());
}

void BM_ClosedLoopField(benchmark::State& state) {
  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = static_cast<int>(state.range(0));
  ChannelSystem cs = build_mhd_system(cfg);
  std::mt19937_64 rng(2);
  Vec nu = cs.nu_e + 0.01 * random_state(rng, *cs.ws, 0.0);
  Vec beta = 0.01 * random_state(rng, *cs.ws, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cs.sys.closed_loop_field(nu, beta));
  state.SetItemsProcessed(state.iterations());
}

void BM_ShapedEnergy(benchmark::State& state) {
  ChannelConfig cfg;
  cfg.Nx = cfg.Ny = static_cast<int>(state.range(0));
  ChannelSystem cs = build_mhd_system(cfg);
  std::mt19937_64 rng(3);
  Vec nu = cs.nu_e + 0.01 * random_state(rng, *cs.ws, 0.0);
  Vec beta = 0.01 * random_state(rng, *cs.ws, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(cs.sys.shaped_energy(nu, beta));
}

}  // namespace

BENCHMARK(BM_Advect)->Arg(8)->Arg(16)->Arg(24)->Arg(48);
BENCHMARK(BM_ClosedLoopField)->Arg(8)->Arg(16)->Arg(24)->Arg(48);
BENCHMARK(BM_ShapedEnergy)->Arg(24);

BENCHMARK_MAIN();
