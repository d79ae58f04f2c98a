#include <benchmark/benchmark.h>

#include <vector>

#include "jfcs/channel.hpp"
#include "jfcs/rng.hpp"
#include "jfcs/sched_mrt.hpp"
#include "jfcs/sched_zfbf.hpp"
#include "jfcs/sim.hpp"

namespace {

using namespace jfcs;

struct SlotFixture {
  TopologyConfig cfg;
  Topology topo;
  LargeScaleState ls;
  ChannelRealization ch;
  std::vector<std::vector<int>> active;
  std::vector<double> weight;
  double noise;

  explicit SlotFixture(int ues, int rus, int antennas) {
    cfg.num_dus = 1;
    cfg.rus_per_du = rus;
    cfg.num_ues = ues;
    cfg.antennas_per_ru = antennas;
    cfg.cell_radius_m = 300.0;
    RngStream placement(1, "placement"), shadowing(1, "shadowing"), fading(1, "fading");
    topo = make_topology(cfg, placement);
    const auto pos = draw_ue_positions(cfg, placement);
    ls = make_large_scale(topo, pos, shadowing);
    ch = draw_channel(ls, fading);
    active.assign(ues, {});
    for (int ue = 0; ue < ues; ++ue)
      for (int ru = 0; ru < rus; ++ru) active[ue].push_back(ru);
    weight.assign(ues, 1.0);
    for (int ue = 0; ue < ues; ++ue) weight[ue] = 0.5 + 0.25 * ue;
    noise = dbm_to_watts(noise_power_dbm(cfg.bandwidth_hz, cfg.noise_figure_db));
  }
};

void BM_ChannelDraw(benchmark::State& state) {
  SlotFixture f(12, 8, static_cast<int>(state.range(0)));
  RngStream fading(7, "fading");
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_channel(f.ls, fading));
  }
}
BENCHMARK(BM_ChannelDraw)->Arg(8)->Arg(16)->Arg(32);

void BM_ZfScheduleSlot(benchmark::State& state) {
  SlotFixture f(4, 4, static_cast<int>(state.range(0)));
  const std::vector<double> min_rate(16, 0.0);
  const double w_prime = f.cfg.bandwidth_hz / 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zf_schedule(f.ch, f.active, f.weight, min_rate, f.cfg.p_max_w,
                                         w_prime, 1e-3, f.noise, {}));
  }
}
BENCHMARK(BM_ZfScheduleSlot)->Arg(8)->Arg(16)->Arg(32);

void BM_MrtIaSlot(benchmark::State& state) {
  SlotFixture f(4, 2, 8);
  const auto inst = make_mrt_instance(f.ch, f.active, f.weight, {}, f.cfg.p_max_w, f.noise,
                                      f.cfg.bandwidth_hz);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ia_schedule(inst));
  }
}
BENCHMARK(BM_MrtIaSlot);

void BM_DeskFrame(benchmark::State& state) {
  auto cfg = SimConfig::desk_preset();
  cfg.frames = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(cfg));
  }
}
BENCHMARK(BM_DeskFrame)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
