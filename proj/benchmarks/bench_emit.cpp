#include <benchmark/benchmark.h>

#include "netcarta/emit/emitter.hpp"
#include "netcarta/emit/loader.hpp"

using namespace netcarta;

namespace {

Experiment synthetic(int endpoints, int networks) {
  Experiment exp;
  std::vector<Id> nets;
  for (int n = 0; n < networks; ++n) nets.push_back(exp.network_for_subnet("10." + std::to_string(n) + ".0.0/16"));
  for (int i = 0; i < endpoints; ++i) {
    const int n = i % networks;
    const int host = 10 + i / networks;
    exp.add_endpoint({Edge{nets[n], {{"ip", "10." + std::to_string(n) + "." + std::to_string(host / 256) + "." +
                                                 std::to_string(host % 256) + "/16"}}}},
                     {{"hostname", "host" + std::to_string(i)}});
  }
  return exp;
}

void BM_EmitDefault(benchmark::State& state) {
  const auto exp = synthetic(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) {
    auto result = emit::emit(exp, emit::default_templates());
    benchmark::DoNotOptimize(result.script.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmitDefault)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
