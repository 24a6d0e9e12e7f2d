#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <optional>
#include <string_view>
#include <vector>

#include "netcarta/ir/id.hpp"
#include "netcarta/ir/observation.hpp"
#include "netcarta/ir/query.hpp"
#include "netcarta/ir/types.hpp"
#include "netcarta/net.hpp"

namespace netcarta {

// The graph IR: endpoints attached by edges to network nodes, plus a config map.
//
// Endpoints and networks share one id counter. Every edge references an existing
// network; the mutators below keep that true and throw IntegrityError otherwise.
// Node metadata may be edited freely through mutable_data().
class Experiment {
 public:
  Id allocate_id();
  Id next_id() const { return Id{next_id_}; }

  const std::map<Id, Endpoint>& endpoints() const { return endpoints_; }
  const std::map<Id, NetworkNode>& networks() const { return networks_; }
  const MetadataMap& config() const { return config_; }
  MetadataMap& config() { return config_; }

  const Endpoint* find_endpoint(Id nid) const;
  const NetworkNode* find_network(Id nid) const;
  bool contains(Id nid) const;

  // Endpoint or network metadata. Throws NotFoundError.
  MetadataMap& mutable_data(Id nid);

  Id add_endpoint(std::vector<Edge> edges, MetadataMap data);
  void replace_endpoint(Id nid, std::vector<Edge> edges, MetadataMap data);
  void set_edges(Id nid, std::vector<Edge> edges);

  // Throws ValidationError when `subnet` is set and another network already
  // owns that canonical subnet.
  Id add_network(MetadataMap data);

  void remove_endpoint(Id nid);
  // Rejected with IntegrityError while any edge references the network.
  void remove_network(Id nid);

  std::size_t reference_count(Id network) const;

  // Existing network for the canonicalized subnet, or a new one.
  // Throws ParseError for malformed CIDR text.
  Id network_for_subnet(std::string_view cidr);
  // Longest-prefix match over networks that carry a `subnet`.
  std::optional<Id> network_containing(Ipv4Address ip) const;
  // Sentinel network for endpoints whose subnet cannot be inferred.
  Id unknown_network();

  // Merge an observation: match by edge mac, then edge ip, else create.
  // Throws ValidationError (experiment unchanged) for invalid observations.
  Id upsert_endpoint(const Observation& obs);

  std::vector<Id> find_nodes(const Query& query) const;
  std::vector<Id> find_nodes(std::string_view query) const;

  // Throws IntegrityError listing every dangling edge reference.
  void validate() const;

  // Insert with an explicit id; used by deserialization. Bumps the counter.
  void insert_endpoint(Endpoint endpoint);
  void insert_network(NetworkNode network);

  // Structural equality over endpoints, networks, and config.
  bool operator==(const Experiment& other) const;

 private:
  void check_edges(Id owner, const std::vector<Edge>& edges) const;
  std::optional<Id> network_with_subnet(std::string_view canonical) const;
  void index_edges(const Endpoint& endpoint);
  void unindex_edges(const Endpoint& endpoint);
  // Lowest-nid endpoint holding `value` in the index, with its first such edge.
  Endpoint* first_holder(const std::map<std::string, std::set<Id>, std::less<>>& index,
                         std::string_view value, std::string_view key, bool address_only,
                         std::size_t& edge_index);

  std::map<Id, Endpoint> endpoints_;
  std::map<Id, NetworkNode> networks_;
  MetadataMap config_;
  std::uint64_t next_id_ = 1;
  // Edge mac and ip address part -> endpoints carrying them; speeds up upsert.
  std::map<std::string, std::set<Id>, std::less<>> by_mac_;
  std::map<std::string, std::set<Id>, std::less<>> by_address_;
};

// Comma-separated sets as stored in metadata ("22,6667").
std::vector<int> parse_port_list(std::string_view text);
std::string join_port_list(const std::vector<int>& ports);
std::vector<std::string> split_list(std::string_view text);
std::string join_list(const std::vector<std::string>& items);

}  // namespace netcarta
