#include "netcarta/ir/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "netcarta/error.hpp"

namespace netcarta {

Id Experiment::allocate_id() { return Id{next_id_++}; }

const Endpoint* Experiment::find_endpoint(Id nid) const {
  auto it = endpoints_.find(nid);
  return it == endpoints_.end() ? nullptr : &it->second;
}

const NetworkNode* Experiment::find_network(Id nid) const {
  auto it = networks_.find(nid);
  return it == networks_.end() ? nullptr : &it->second;
}

bool Experiment::contains(Id nid) const {
  return endpoints_.contains(nid) || networks_.contains(nid);
}

MetadataMap& Experiment::mutable_data(Id nid) {
  if (auto it = endpoints_.find(nid); it != endpoints_.end()) return it->second.data;
  if (auto it = networks_.find(nid); it != networks_.end()) return it->second.data;
  throw NotFoundError("no node with id " + nid.to_string());
}

void Experiment::check_edges(Id owner, const std::vector<Edge>& edges) const {
  std::string dangling;
  for (const auto& edge : edges) {
    if (!networks_.contains(edge.network)) {
      if (!dangling.empty()) dangling += ", ";
      dangling += owner.to_string() + "->" + edge.network.to_string();
    }
    if (auto mac = lookup(edge.data, keys::mac); !mac.empty() && !is_canonical_mac(mac)) {
      throw ValidationError("endpoint " + owner.to_string() + ": malformed mac '" +
                            std::string(mac) + "'");
    }
    if (auto ip = lookup(edge.data, keys::ip); ip.find('/') != std::string_view::npos) {
      if (!Cidr::try_parse(ip)) {
        throw ValidationError("endpoint " + owner.to_string() + ": malformed ip '" +
                              std::string(ip) + "'");
      }
    }
  }
  if (!dangling.empty()) {
    throw IntegrityError("dangling edge references: " + dangling);
  }
}

void Experiment::index_edges(const Endpoint& endpoint) {
  for (const auto& edge : endpoint.edges) {
    if (auto mac = lookup(edge.data, keys::mac); !mac.empty()) by_mac_[std::string(mac)].insert(endpoint.nid);
    if (auto ip = address_part(lookup(edge.data, keys::ip)); !ip.empty()) {
      by_address_[std::string(ip)].insert(endpoint.nid);
    }
  }
}

void Experiment::unindex_edges(const Endpoint& endpoint) {
  auto drop = [&](auto& index, std::string_view value) {
    if (value.empty()) return;
    auto it = index.find(value);
    if (it == index.end()) return;
    it->second.erase(endpoint.nid);
    if (it->second.empty()) index.erase(it);
  };
  for (const auto& edge : endpoint.edges) {
    drop(by_mac_, lookup(edge.data, keys::mac));
    drop(by_address_, address_part(lookup(edge.data, keys::ip)));
  }
}

Endpoint* Experiment::first_holder(const std::map<std::string, std::set<Id>, std::less<>>& index,
                                   std::string_view value, std::string_view key,
                                   bool address_only, std::size_t& edge_index) {
  auto it = index.find(value);
  if (it == index.end() || it->second.empty()) return nullptr;
  Endpoint& endpoint = endpoints_.at(*it->second.begin());
  for (std::size_t i = 0; i < endpoint.edges.size(); ++i) {
    auto held = lookup(endpoint.edges[i].data, key);
    if ((address_only ? address_part(held) : held) == value) {
      edge_index = i;
      return &endpoint;
    }
  }
  return nullptr;
}

Id Experiment::add_endpoint(std::vector<Edge> edges, MetadataMap data) {
  check_edges(Id{next_id_}, edges);
  const Id nid = allocate_id();
  index_edges(endpoints_.emplace(nid, Endpoint{nid, std::move(edges), std::move(data)}).first->second);
  return nid;
}

void Experiment::replace_endpoint(Id nid, std::vector<Edge> edges, MetadataMap data) {
  auto it = endpoints_.find(nid);
  if (it == endpoints_.end()) throw NotFoundError("no endpoint with id " + nid.to_string());
  check_edges(nid, edges);
  unindex_edges(it->second);
  it->second.edges = std::move(edges);
  it->second.data = std::move(data);
  index_edges(it->second);
}

void Experiment::set_edges(Id nid, std::vector<Edge> edges) {
  auto it = endpoints_.find(nid);
  if (it == endpoints_.end()) throw NotFoundError("no endpoint with id " + nid.to_string());
  check_edges(nid, edges);
  unindex_edges(it->second);
  it->second.edges = std::move(edges);
  index_edges(it->second);
}

std::optional<Id> Experiment::network_with_subnet(std::string_view canonical) const {
  for (const auto& [nid, network] : networks_) {
    if (lookup(network.data, keys::subnet) == canonical) return nid;
  }
  return std::nullopt;
}

Id Experiment::add_network(MetadataMap data) {
  if (auto it = data.find(keys::subnet); it != data.end()) {
    const auto cidr = Cidr::parse(it->second).canonical().to_string();
    if (network_with_subnet(cidr)) {
      throw ValidationError("a network for subnet " + cidr + " already exists");
    }
    it->second = cidr;
  }
  const Id nid = allocate_id();
  networks_.emplace(nid, NetworkNode{nid, std::move(data)});
  return nid;
}

void Experiment::remove_endpoint(Id nid) {
  auto it = endpoints_.find(nid);
  if (it == endpoints_.end()) throw NotFoundError("no endpoint with id " + nid.to_string());
  unindex_edges(it->second);
  endpoints_.erase(it);
}

void Experiment::remove_network(Id nid) {
  if (!networks_.contains(nid)) {
    throw NotFoundError("no network with id " + nid.to_string());
  }
  if (auto refs = reference_count(nid); refs > 0) {
    throw IntegrityError("network " + nid.to_string() + " is referenced by " +
                         std::to_string(refs) + " edge(s)");
  }
  networks_.erase(nid);
}

std::size_t Experiment::reference_count(Id network) const {
  std::size_t count = 0;
  for (const auto& [nid, endpoint] : endpoints_) {
    for (const auto& edge : endpoint.edges) count += edge.network == network ? 1 : 0;
  }
  return count;
}

Id Experiment::network_for_subnet(std::string_view cidr) {
  const auto canonical = Cidr::parse(cidr).canonical().to_string();
  if (auto existing = network_with_subnet(canonical)) return *existing;
  const Id nid = allocate_id();
  networks_.emplace(nid, NetworkNode{nid, MetadataMap{{std::string(keys::subnet), canonical}}});
  return nid;
}

std::optional<Id> Experiment::network_containing(Ipv4Address ip) const {
  std::optional<Id> best;
  int best_prefix = -1;
  for (const auto& [nid, network] : networks_) {
    auto subnet = lookup(network.data, keys::subnet);
    if (subnet.empty()) continue;
    auto cidr = Cidr::try_parse(subnet);
    if (cidr && cidr->contains(ip) && cidr->prefix > best_prefix) {
      best = nid;
      best_prefix = cidr->prefix;
    }
  }
  return best;
}

Id Experiment::unknown_network() {
  if (auto it = config_.find(keys::unknown_network); it != config_.end()) {
    std::uint64_t value = 0;
    const auto& text = it->second;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && p == text.data() + text.size() && networks_.contains(Id{value})) {
      return Id{value};
    }
  }
  const Id nid = allocate_id();
  networks_.emplace(nid, NetworkNode{nid, MetadataMap{{std::string(keys::name), "unknown"}}});
  config_[std::string(keys::unknown_network)] = nid.to_string();
  return nid;
}

namespace {

// Where an observed interface belongs. `strong` placements come from explicit
// subnet information (hint, prefix, or a containing network); weak ones fall
// back to the unknown sentinel.
struct Placement {
  std::optional<Id> network;
  std::string ip_text;
  bool strong = false;
};

void merge_list(MetadataMap& data, std::string_view key,
                const std::vector<std::string>& incoming) {
  if (incoming.empty()) return;
  std::set<std::string> merged(incoming.begin(), incoming.end());
  for (auto& item : split_list(lookup(data, key))) merged.insert(std::move(item));
  data[std::string(key)] = join_list({merged.begin(), merged.end()});
}

void merge_ports(MetadataMap& data, const std::vector<int>& incoming) {
  if (incoming.empty()) return;
  std::set<int> merged(incoming.begin(), incoming.end());
  for (int port : parse_port_list(lookup(data, keys::ports))) merged.insert(port);
  data[std::string(keys::ports)] = join_port_list({merged.begin(), merged.end()});
}

void merge_node_data(MetadataMap& data, const Observation& obs) {
  if (obs.hostname) data[std::string(keys::hostname)] = *obs.hostname;
  if (obs.os) data[std::string(keys::os)] = *obs.os;
  if (obs.dhcp) data[std::string(keys::dhcp)] = "true";
  merge_ports(data, obs.ports);
  merge_list(data, keys::services, obs.services);
}

// Drop later edges that duplicate an earlier (network, ip) pair, folding their
// metadata into the survivor.
void collapse_duplicate_edges(std::vector<Edge>& edges) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (auto& edge : edges) {
    auto ip = lookup(edge.data, keys::ip);
    auto dup = std::find_if(kept.begin(), kept.end(), [&](const Edge& k) {
      return k.network == edge.network && !ip.empty() && lookup(k.data, keys::ip) == ip;
    });
    if (dup == kept.end()) {
      kept.push_back(std::move(edge));
    } else {
      for (auto& [k, v] : edge.data) dup->data.try_emplace(k, v);
    }
  }
  edges = std::move(kept);
}

}  // namespace

Id Experiment::upsert_endpoint(const Observation& raw) {
  const Observation obs = normalized(raw);

  Placement placement;
  if (obs.network_hint) {
    const auto hint = Cidr::parse(*obs.network_hint);
    placement.network = network_for_subnet(obs.network_hint->c_str());
    placement.strong = true;
    if (obs.ip) placement.ip_text = *obs.ip + "/" + std::to_string(obs.prefix_len.value_or(hint.prefix));
  } else if (obs.ip && obs.prefix_len) {
    placement.ip_text = *obs.ip + "/" + std::to_string(*obs.prefix_len);
    placement.network = network_for_subnet(placement.ip_text);
    placement.strong = true;
  } else if (obs.ip) {
    const auto address = *Ipv4Address::parse(*obs.ip);
    if (auto containing = network_containing(address)) {
      const auto cidr = Cidr::parse(lookup(networks_.at(*containing).data, keys::subnet));
      placement.network = containing;
      placement.ip_text = *obs.ip + "/" + std::to_string(cidr.prefix);
      placement.strong = true;
    } else {
      placement.ip_text = *obs.ip;
    }
  }

  // Match precedence: edge mac, then edge ip address.
  Endpoint* match = nullptr;
  std::size_t edge_index = 0;
  if (obs.mac) match = first_holder(by_mac_, *obs.mac, keys::mac, false, edge_index);
  if (!match && obs.ip) match = first_holder(by_address_, *obs.ip, keys::ip, true, edge_index);

  if (!match) {
    Edge edge;
    edge.network = placement.network ? *placement.network : unknown_network();
    if (obs.ip) edge.data[std::string(keys::ip)] = placement.ip_text;
    if (obs.mac) edge.data[std::string(keys::mac)] = *obs.mac;
    MetadataMap data;
    merge_node_data(data, obs);
    const Id nid = allocate_id();
    index_edges(endpoints_.emplace(nid, Endpoint{nid, {std::move(edge)}, std::move(data)}).first->second);
    return nid;
  }

  unindex_edges(*match);
  Edge& edge = match->edges[edge_index];
  if (obs.mac) edge.data[std::string(keys::mac)] = *obs.mac;
  if (obs.ip) {
    const bool same_address = address_part(lookup(edge.data, keys::ip)) == *obs.ip;
    if (placement.strong) {
      edge.data[std::string(keys::ip)] = placement.ip_text;
      edge.network = *placement.network;
    } else if (!same_address) {
      edge.data[std::string(keys::ip)] = placement.ip_text;
      edge.network = unknown_network();
    }
  } else if (placement.strong) {
    edge.network = *placement.network;
  }
  collapse_duplicate_edges(match->edges);
  index_edges(*match);
  merge_node_data(match->data, obs);
  return match->nid;
}

std::vector<Id> Experiment::find_nodes(const Query& query) const {
  std::vector<Id> result;
  for (const auto& [nid, endpoint] : endpoints_) {
    if (query.matches(endpoint)) result.push_back(nid);
  }
  return result;
}

std::vector<Id> Experiment::find_nodes(std::string_view query) const {
  return find_nodes(Query::parse(query));
}

void Experiment::validate() const {
  std::string dangling;
  for (const auto& [nid, endpoint] : endpoints_) {
    for (const auto& edge : endpoint.edges) {
      if (!networks_.contains(edge.network)) {
        if (!dangling.empty()) dangling += ", ";
        dangling += nid.to_string() + "->" + edge.network.to_string();
      }
    }
  }
  if (!dangling.empty()) throw IntegrityError("dangling edge references: " + dangling);
}

void Experiment::insert_endpoint(Endpoint endpoint) {
  if (endpoint.nid.value == 0) throw ValidationError("node ids must be positive");
  if (contains(endpoint.nid)) {
    throw IntegrityError("duplicate node id " + endpoint.nid.to_string());
  }
  next_id_ = std::max(next_id_, endpoint.nid.value + 1);
  const Id nid = endpoint.nid;
  index_edges(endpoints_.emplace(nid, std::move(endpoint)).first->second);
}

void Experiment::insert_network(NetworkNode network) {
  if (network.nid.value == 0) throw ValidationError("node ids must be positive");
  if (contains(network.nid)) {
    throw IntegrityError("duplicate node id " + network.nid.to_string());
  }
  next_id_ = std::max(next_id_, network.nid.value + 1);
  const Id nid = network.nid;
  networks_.emplace(nid, std::move(network));
}

bool Experiment::operator==(const Experiment& other) const {
  return endpoints_ == other.endpoints_ && networks_ == other.networks_ &&
         config_ == other.config_;
}

std::vector<int> parse_port_list(std::string_view text) {
  std::vector<int> ports;
  for (const auto& item : split_list(text)) {
    int port = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), port);
    if (ec == std::errc{} && p == item.data() + item.size()) ports.push_back(port);
  }
  return ports;
}

std::string join_port_list(const std::vector<int>& ports) {
  std::string out;
  for (std::size_t i = 0; i < ports.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(ports[i]);
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> items;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto item = text.substr(0, comma);
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return items;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace netcarta
