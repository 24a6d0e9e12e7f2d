#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "netcarta/ir/id.hpp"

namespace netcarta {

// Unstructured key/value metadata. Ordered so serialization is canonical.
using MetadataMap = std::map<std::string, std::string, std::less<>>;

// Well-known metadata keys.
namespace keys {
inline constexpr std::string_view ip = "ip";
inline constexpr std::string_view mac = "mac";
inline constexpr std::string_view hostname = "hostname";
inline constexpr std::string_view os = "os";
inline constexpr std::string_view ports = "ports";
inline constexpr std::string_view services = "services";
inline constexpr std::string_view dhcp = "dhcp";
inline constexpr std::string_view marked = "marked";
inline constexpr std::string_view role = "role";
inline constexpr std::string_view subnet = "subnet";
inline constexpr std::string_view name = "name";
// Config key holding the nid of the sentinel network for unplaceable ips.
inline constexpr std::string_view unknown_network = "unknown_network";
}  // namespace keys

// An endpoint's attachment to a network.
struct Edge {
  Id network;
  MetadataMap data;

  bool operator==(const Edge&) const = default;
};

struct Endpoint {
  Id nid;
  std::vector<Edge> edges;
  MetadataMap data;

  bool operator==(const Endpoint&) const = default;
};

struct NetworkNode {
  Id nid;
  MetadataMap data;

  bool operator==(const NetworkNode&) const = default;
};

// Lookup helper: value for key or empty view.
inline std::string_view lookup(const MetadataMap& map, std::string_view key) {
  auto it = map.find(key);
  return it == map.end() ? std::string_view{} : std::string_view{it->second};
}

}  // namespace netcarta
