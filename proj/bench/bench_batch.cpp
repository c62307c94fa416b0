#include <benchmark/benchmark.h>

#include "akaprime/batch.hpp"
#include "akaprime/config.hpp"

using namespace akaprime;

namespace {

struct Workload {
  SubscriberStore store;
  std::vector<Scenario> scenarios;
};

// Faultless sessions spread over `n` subscribers, one seed per session.
Workload make_workload(std::size_t n) {
  ProvisionSpec spec;
  spec.count = n;
  spec.seed = from_hex("be7c40");
  Workload w{SubscriberStore(provision(spec)), {}};
  for (const auto& sub : w.store.records()) {
    Scenario sc;
    sc.name = sub.supi.imsi();
    sc.subscriber = sub.supi.imsi();
    sc.mcc = sub.supi.mcc();
    sc.mnc = sub.supi.mnc();
    sc.rng_seed = to_bytes(as_bytes(sub.supi.imsi()));
    w.scenarios.push_back(std::move(sc));
  }
  return w;
}

void BM_BatchSerial(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(w.scenarios, w.store));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State& state) {
  const Workload w = make_workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(w.scenarios, w.store));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SingleSession(benchmark::State& state) {
  const Workload w = make_workload(1);
  for (auto _ : state) {
    SubscriberStore store = w.store;
    benchmark::DoNotOptimize(run_scenario(w.scenarios.front(), store));
  }
}

}  // namespace

BENCHMARK(BM_SingleSession);
BENCHMARK(BM_BatchSerial)->Arg(64)->Arg(512)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Arg(64)->Arg(512)->UseRealTime();

BENCHMARK_MAIN();
