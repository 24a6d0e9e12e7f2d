#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::daemon {

enum class MutationKind {
  upsert_endpoint,     // payload: Observation
  create_network,      // payload: {"D":{...}}
  put_endpoint,        // payload: {"NID"?, "Edges":[...], "D":{...}}; no NID creates
  set_edge,            // payload: {"NID":endpoint, "N":network, "D":{...}}
  delete_node,         // payload: {"NID":id}; endpoints or unreferenced networks
  set_config,          // payload: {...} replaces the config map
  replace_experiment,  // payload: full experiment document
  link_routers,        // payload: [RouterSpec...]
  ingest_traceroute,   // payload: [HopRecord...]
};

std::string_view to_string(MutationKind kind);
MutationKind mutation_kind_from_string(std::string_view text);

struct Mutation {
  MutationKind kind = MutationKind::upsert_endpoint;
  nlohmann::json payload;
  // Optimistic concurrency for read-modify-write clients: reject with
  // conflict unless the store is still at this generation.
  std::optional<std::uint64_t> expected_generation;
};

void to_json(nlohmann::json& j, const Mutation& m);
void from_json(const nlohmann::json& j, Mutation& m);

enum class ApplyStatus { ok, created, invalid, not_found, conflict };

struct ApplyResult {
  ApplyStatus status = ApplyStatus::ok;
  std::vector<Id> affected;
  std::uint64_t generation = 0;
  std::vector<Diagnostic> diagnostics;
  std::string message;

  bool accepted() const {
    return status == ApplyStatus::ok || status == ApplyStatus::created;
  }
};

// Applies one mutation to `experiment` in place. Throws netcarta errors for
// invalid payloads; callers that need atomicity apply to a copy.
ApplyResult apply_to(Experiment& experiment, const Mutation& mutation);

}  // namespace netcarta::daemon
