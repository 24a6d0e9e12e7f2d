#include "netcarta/daemon/snapshot.hpp"

#include <algorithm>

#include "netcarta/error.hpp"

namespace netcarta::daemon {

namespace {

std::string endpoint_label(const Endpoint& endpoint) {
  if (auto hostname = lookup(endpoint.data, keys::hostname); !hostname.empty()) {
    return std::string(hostname);
  }
  for (const auto& edge : endpoint.edges) {
    if (auto ip = lookup(edge.data, keys::ip); !ip.empty()) {
      return std::string(address_part(ip));
    }
  }
  return "node" + endpoint.nid.to_string();
}

std::string network_label(const NetworkNode& network) {
  if (auto subnet = lookup(network.data, keys::subnet); !subnet.empty()) {
    return std::string(subnet);
  }
  if (auto name = lookup(network.data, keys::name); !name.empty()) return std::string(name);
  return "network" + network.nid.to_string();
}

std::string_view kind_name(GraphNodeKind kind) {
  switch (kind) {
    case GraphNodeKind::endpoint: return "endpoint";
    case GraphNodeKind::network: return "network";
    case GraphNodeKind::router: return "router";
  }
  return "endpoint";
}

GraphNodeKind kind_from_name(std::string_view name) {
  if (name == "endpoint") return GraphNodeKind::endpoint;
  if (name == "network") return GraphNodeKind::network;
  if (name == "router") return GraphNodeKind::router;
  throw ParseError("unknown graph node kind '" + std::string(name) + "'");
}

}  // namespace

GraphSnapshot snapshot_graph(const Experiment& experiment, std::uint64_t generation) {
  GraphSnapshot snap;
  snap.generation = generation;
  snap.nodes.reserve(experiment.endpoints().size() + experiment.networks().size());
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    GraphNode node{nid, endpoint_label(endpoint), GraphNodeKind::endpoint, std::nullopt};
    if (lookup(endpoint.data, keys::role) == "router") node.kind = GraphNodeKind::router;
    if (auto os = lookup(endpoint.data, keys::os); !os.empty()) node.os = std::string(os);
    snap.nodes.push_back(std::move(node));
    for (const auto& edge : endpoint.edges) snap.links.push_back(GraphLink{nid, edge.network});
  }
  for (const auto& [nid, network] : experiment.networks()) {
    snap.nodes.push_back(GraphNode{nid, network_label(network), GraphNodeKind::network,
                                   std::nullopt});
  }
  std::sort(snap.nodes.begin(), snap.nodes.end(),
            [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  return snap;
}

void to_json(nlohmann::json& j, const GraphSnapshot& snapshot) {
  auto nodes = nlohmann::json::array();
  for (const auto& node : snapshot.nodes) {
    nlohmann::json n{{"id", node.id.value}, {"label", node.label}, {"kind", kind_name(node.kind)}};
    if (node.os) n["os"] = *node.os;
    nodes.push_back(std::move(n));
  }
  auto links = nlohmann::json::array();
  for (const auto& link : snapshot.links) {
    links.push_back({{"source", link.source.value}, {"target", link.target.value}});
  }
  j = nlohmann::json{{"generation", snapshot.generation},
                     {"nodes", std::move(nodes)},
                     {"links", std::move(links)}};
}

void from_json(const nlohmann::json& j, GraphSnapshot& snapshot) {
  snapshot = GraphSnapshot{};
  snapshot.generation = j.at("generation").get<std::uint64_t>();
  for (const auto& n : j.at("nodes")) {
    GraphNode node;
    node.id = Id{n.at("id").get<std::uint64_t>()};
    node.label = n.value("label", "");
    node.kind = kind_from_name(n.at("kind").get<std::string>());
    if (auto it = n.find("os"); it != n.end()) node.os = it->get<std::string>();
    snapshot.nodes.push_back(std::move(node));
  }
  for (const auto& l : j.at("links")) {
    snapshot.links.push_back(GraphLink{Id{l.at("source").get<std::uint64_t>()},
                                       Id{l.at("target").get<std::uint64_t>()}});
  }
}

}  // namespace netcarta::daemon
