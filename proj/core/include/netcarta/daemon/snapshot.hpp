#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcarta/ir/experiment.hpp"

namespace netcarta::daemon {

enum class GraphNodeKind { endpoint, network, router };

struct GraphNode {
  Id id;
  std::string label;
  GraphNodeKind kind = GraphNodeKind::endpoint;
  std::optional<std::string> os;

  bool operator==(const GraphNode&) const = default;
};

struct GraphLink {
  Id source;  // endpoint
  Id target;  // network

  bool operator==(const GraphLink&) const = default;
};

// Bipartite projection of the IR for visualization clients.
struct GraphSnapshot {
  std::vector<GraphNode> nodes;
  std::vector<GraphLink> links;
  std::uint64_t generation = 0;
};

// One node per endpoint and per network (ascending id), one link per edge.
GraphSnapshot snapshot_graph(const Experiment& experiment, std::uint64_t generation);

void to_json(nlohmann::json& j, const GraphSnapshot& snapshot);
void from_json(const nlohmann::json& j, GraphSnapshot& snapshot);

}  // namespace netcarta::daemon
