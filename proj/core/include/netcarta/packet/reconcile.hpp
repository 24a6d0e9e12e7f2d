#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/observation.hpp"

namespace netcarta::packet {

enum class ConflictMode { drop, keep_first, keep_last };

// "drop", "keep-first" or "keep-last"; anything else throws ConfigError.
ConflictMode parse_conflict_mode(std::string_view text);
std::string_view to_string(ConflictMode mode);

struct ReconcileResult {
  std::vector<Observation> observations;
  std::vector<Diagnostic> diagnostics;  // one P3 per conflict group
};

// Two kinds of conflict, evaluated over the whole stream:
//  * one mac carrying two or more distinct non-DHCP ips within one subnet
//    (the subnet comes from prefix_len or network_hint; observations with
//    neither share a single bucket);
//  * one ip carrying two or more distinct macs.
// A conflict group is every observation carrying the offending mac or ip;
// overlapping groups merge. `drop` removes each group, `keep_first` and
// `keep_last` keep the earliest or latest member. Survivors keep stream order.
ReconcileResult reconcile(std::span<const Observation> observations,
                          ConflictMode mode = ConflictMode::drop);

// Subnet bucket used by the mac rule, exposed for tests.
std::string subnet_key(const Observation& observation);

}  // namespace netcarta::packet
