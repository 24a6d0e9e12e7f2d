#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::text {

struct HopRecord {
  int hop_index = 0;
  std::optional<std::string> ip;
  std::optional<std::string> hostname;
  std::optional<double> rtt_ms;

  bool operator==(const HopRecord&) const = default;
};

struct TracerouteParseResult {
  std::vector<HopRecord> hops;
  std::vector<Diagnostic> diagnostics;
};

// Standard traceroute text: optional "traceroute to ..." header, then
// `N  host (ip)  t1 ms ...`, `N  ip  t1 ms ...` or `N  * * *` lines. When a hop
// line lists several responders, the first one is recorded.
TracerouteParseResult parse_traceroute(std::string_view text);

struct TraceIngestResult {
  std::vector<Id> endpoints;
  std::vector<Id> hop_networks;
};

// One endpoint per resolved hop (reusing an endpoint that already owns the ip)
// and one synthetic point-to-point network `hopnet-<i>` between consecutive
// resolved hops. No alias resolution.
TraceIngestResult ingest_traceroute(Experiment& experiment, std::span<const HopRecord> hops);

void to_json(nlohmann::json& j, const HopRecord& hop);
void from_json(const nlohmann::json& j, HopRecord& hop);

}  // namespace netcarta::text
