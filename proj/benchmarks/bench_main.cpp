#include <benchmark/benchmark.h>

#include "obdwf/analysis.hpp"
#include "obdwf/channel.hpp"
#include "obdwf/engine.hpp"
#include "obdwf/protocols.hpp"
#include "obdwf/rng.hpp"

namespace {

using namespace obdwf;

void BM_Philox(benchmark::State& state) {
  CounterRng rng(1, Stream::kUser);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

void BM_FreshCounterRng(benchmark::State& state) {
  std::uint64_t t = 0;
  for (auto _ : state) {
    CounterRng rng(1, Stream::kFading, t++, 3);
    benchmark::DoNotOptimize(uniform01(rng));
  }
}
BENCHMARK(BM_FreshCounterRng);

void BM_ConnectionMc(benchmark::State& state) {
  const PhyParams phy = PhyParams::from_beta(110.0);
  const DiskGeometry g(2.5, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        connection_probability_mc(phy, RayleighFading{}, g, Endpoint::kSource, 10000, 1));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ConnectionMc);

void BM_ObdwfFrameStep(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const PhyParams phy = PhyParams::from_beta(static_cast<double>(k));
  FrameLinks links(phy, RayleighFading{}, 1, k);
  for (std::size_t j = 0; j < k; ++j) links.set_relay_distances(j, 2.5, 2.5);
  links.set_direct_distance(5.0);
  RelayNetwork net(k, kUnbounded);
  ObdwfState s;
  PacketId next = 0;
  std::int64_t t = 0;
  for (auto _ : state) {
    if (net.source.empty()) net.source.enqueue(Packet{next++, 1.0, t, {}});
    links.begin_frame(t);
    CounterRng rng(1, Stream::kContention, static_cast<std::uint64_t>(t));
    benchmark::DoNotOptimize(obdwf_step(s, links, net, rng));
    ++t;
  }
}
BENCHMARK(BM_ObdwfFrameStep)->Arg(32)->Arg(110)->Arg(256);

void BM_Run(benchmark::State& state) {
  SimConfig c;
  c.relays = static_cast<int>(state.range(0));
  apply_rate_rule(c);
  c.protocol = state.range(1) == 0 ? ProtocolSpec{} : ProtocolSpec{ProtocolKind::kDdf, 1};
  c.infinite_backlog = true;
  c.horizon = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
  state.SetItemsProcessed(state.iterations() * c.horizon);
}
BENCHMARK(BM_Run)->Args({110, 0})->Args({110, 1})->Unit(benchmark::kMillisecond);

void BM_PgfMean(benchmark::State& state) {
  const PgfSpec spec{pgf_from_pmf({{0, 0.999}, {15, 0.001}}), pgf_from_pmf({{2, 1.0}})};
  for (auto _ : state) benchmark::DoNotOptimize(pgf_mean_system(spec, 0.015));
}
BENCHMARK(BM_PgfMean);

}  // namespace

BENCHMARK_MAIN();
