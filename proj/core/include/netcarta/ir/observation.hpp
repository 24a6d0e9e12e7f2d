#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace netcarta {

// A normalized fact emitted by a parser; the unit of IR mutation.
struct Observation {
  std::string source;
  std::optional<std::string> mac;
  std::optional<std::string> ip;  // bare dotted quad
  std::optional<int> prefix_len;
  std::optional<std::string> hostname;
  std::optional<std::string> os;
  std::vector<int> ports;
  std::vector<std::string> services;
  std::optional<std::string> network_hint;  // CIDR
  bool dhcp = false;

  bool operator==(const Observation&) const = default;
};

// Throws ValidationError when the observation breaks an invariant:
// no mac and no ip, malformed mac/ip/hint, prefix outside [0,32], or a port
// outside [1,65535].
void validate(const Observation& obs);

// Validated copy with the mac lowercased and port/service lists sorted+unique.
Observation normalized(const Observation& obs);

void to_json(nlohmann::json& j, const Observation& obs);
void from_json(const nlohmann::json& j, Observation& obs);

}  // namespace netcarta
