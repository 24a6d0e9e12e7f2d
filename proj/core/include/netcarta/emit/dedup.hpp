#pragma once

#include <string_view>
#include <vector>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::emit {

enum class DedupMode { drop, suffix, off };

// "drop", "suffix" or "off"; anything else throws ConfigError.
DedupMode parse_dedup_mode(std::string_view text);
std::string_view to_string(DedupMode mode);

// Endpoints are visited in nid order and claim their ips (address part, any
// edge) and hostname.
//   drop    an endpoint reusing a claimed ip (D1) or hostname (D2) is removed
//   suffix  claimed ips still remove the endpoint (D1); a claimed hostname is
//           renamed to the first free name-1, name-2, ... (D3)
//   off     nothing changes
// Works in place; callers that must not mutate pass a copy.
std::vector<Diagnostic> dedup(Experiment& experiment, DedupMode mode);

}  // namespace netcarta::emit
