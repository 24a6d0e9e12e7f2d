#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "frames.hpp"
#include "netcarta/packet/pcap.hpp"
#include "netcarta/text/dhcpd.hpp"

using namespace netcarta;
namespace t = netcarta::testing;

namespace {

void BM_DhcpdIngest(benchmark::State& state) {
  const auto fx = t::generate_dhcp_log(1, static_cast<int>(state.range(0)), 4,
                                       static_cast<int>(state.range(0) * 95 / 100));
  for (auto _ : state) {
    Experiment exp;
    for (const auto& obs : text::parse_dhcpd_log(fx.text, fx.hint_prefix).observations) exp.upsert_endpoint(obs);
    benchmark::DoNotOptimize(exp.endpoints().size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DhcpdIngest)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PcapParse(benchmark::State& state) {
  std::vector<t::Frame> frames;
  for (int i = 0; i < state.range(0); ++i) {
    char mac[18];
    std::snprintf(mac, sizeof mac, "02:00:00:00:%02x:%02x", (i >> 8) & 0xff, i & 0xff);
    const std::string ip = "10.1." + std::to_string((i >> 8) & 0xff) + "." + std::to_string(i & 0xff);
    frames.push_back(i % 2 ? t::arp_frame(2, mac, ip, "02:00:00:00:00:01", "10.1.0.1")
                           : t::syn_frame(mac, ip, 64, 29200,
                                          t::tcp_options({t::opt_mss(1460), t::opt_sok(), t::opt_ts(),
                                                          t::opt_nop(), t::opt_ws(7)})));
  }
  const auto capture = t::pcap_file(frames);
  for (auto _ : state) {
    auto result = packet::parse_pcap(capture);
    benchmark::DoNotOptimize(result.observations.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PcapParse)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
