#include "netcarta/daemon/mutation.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "netcarta/error.hpp"
#include "netcarta/ir/serialize.hpp"
#include "netcarta/text/router_config.hpp"
#include "netcarta/text/traceroute.hpp"

namespace netcarta::daemon {

namespace {

constexpr std::array<std::pair<MutationKind, std::string_view>, 9> kKindNames{{
    {MutationKind::upsert_endpoint, "upsert_endpoint"},
    {MutationKind::create_network, "create_network"},
    {MutationKind::put_endpoint, "put_endpoint"},
    {MutationKind::set_edge, "set_edge"},
    {MutationKind::delete_node, "delete_node"},
    {MutationKind::set_config, "set_config"},
    {MutationKind::replace_experiment, "replace_experiment"},
    {MutationKind::link_routers, "link_routers"},
    {MutationKind::ingest_traceroute, "ingest_traceroute"},
}};

Id required_id(const nlohmann::json& payload, const char* key) {
  auto it = payload.find(key);
  // Values built in code arrive as signed integers; negatives are still invalid.
  if (it == payload.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw ValidationError(std::string("payload needs a numeric \"") + key + "\"");
  }
  return Id{it->get<std::uint64_t>()};
}

nlohmann::json as_array(const nlohmann::json& payload) {
  if (payload.is_array()) return payload;
  return nlohmann::json::array({payload});
}

}  // namespace

std::string_view to_string(MutationKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

MutationKind mutation_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw ParseError("unknown mutation kind '" + std::string(text) + "'");
}

void to_json(nlohmann::json& j, const Mutation& m) {
  j = nlohmann::json{{"kind", to_string(m.kind)}, {"payload", m.payload}};
  if (m.expected_generation) j["expected_generation"] = *m.expected_generation;
}

void from_json(const nlohmann::json& j, Mutation& m) {
  m.kind = mutation_kind_from_string(j.at("kind").get<std::string>());
  m.payload = j.value("payload", nlohmann::json{});
  m.expected_generation.reset();
  if (auto it = j.find("expected_generation"); it != j.end()) {
    m.expected_generation = it->get<std::uint64_t>();
  }
}

ApplyResult apply_to(Experiment& experiment, const Mutation& mutation) {
  ApplyResult result;
  const auto& payload = mutation.payload;
  if (mutation.kind != MutationKind::link_routers &&
      mutation.kind != MutationKind::ingest_traceroute && !payload.is_object()) {
    throw ValidationError(std::string(to_string(mutation.kind)) +
                          " payload must be a JSON object");
  }
  switch (mutation.kind) {
    case MutationKind::upsert_endpoint: {
      result.affected.push_back(experiment.upsert_endpoint(payload.get<Observation>()));
      break;
    }
    case MutationKind::create_network: {
      auto network = network_from_json(payload);
      result.affected.push_back(experiment.add_network(std::move(network.data)));
      result.status = ApplyStatus::created;
      break;
    }
    case MutationKind::put_endpoint: {
      auto endpoint = endpoint_from_json(payload);
      if (endpoint.nid.value == 0) {
        result.affected.push_back(
            experiment.add_endpoint(std::move(endpoint.edges), std::move(endpoint.data)));
        result.status = ApplyStatus::created;
      } else {
        experiment.replace_endpoint(endpoint.nid, std::move(endpoint.edges),
                                    std::move(endpoint.data));
        result.affected.push_back(endpoint.nid);
      }
      break;
    }
    case MutationKind::set_edge: {
      const Id nid = required_id(payload, "NID");
      const Id network = required_id(payload, "N");
      const auto* endpoint = experiment.find_endpoint(nid);
      if (!endpoint) throw NotFoundError("no endpoint with id " + nid.to_string());
      Edge edge{network, metadata_from_json(payload.value("D", nlohmann::json::object()))};
      auto edges = endpoint->edges;
      const auto ip = lookup(edge.data, keys::ip);
      auto same = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) {
        return e.network == network && lookup(e.data, keys::ip) == ip;
      });
      if (same == edges.end()) {
        edges.push_back(std::move(edge));
      } else {
        *same = std::move(edge);
      }
      experiment.set_edges(nid, std::move(edges));
      result.affected.push_back(nid);
      break;
    }
    case MutationKind::delete_node: {
      const Id nid = required_id(payload, "NID");
      if (experiment.find_endpoint(nid)) {
        experiment.remove_endpoint(nid);
      } else {
        experiment.remove_network(nid);
      }
      result.affected.push_back(nid);
      break;
    }
    case MutationKind::set_config: {
      experiment.config() = metadata_from_json(payload);
      break;
    }
    case MutationKind::replace_experiment: {
      experiment = from_document(payload);
      break;
    }
    case MutationKind::link_routers: {
      std::vector<text::RouterSpec> specs;
      for (const auto& item : as_array(payload)) specs.push_back(item.get<text::RouterSpec>());
      auto linked = text::link_routers(specs, experiment);
      result.affected = std::move(linked.routers);
      result.diagnostics = std::move(linked.diagnostics);
      result.status = ApplyStatus::created;
      break;
    }
    case MutationKind::ingest_traceroute: {
      std::vector<text::HopRecord> hops;
      for (const auto& item : as_array(payload)) hops.push_back(item.get<text::HopRecord>());
      auto ingested = text::ingest_traceroute(experiment, hops);
      result.affected = std::move(ingested.endpoints);
      break;
    }
  }
  return result;
}

}  // namespace netcarta::daemon
