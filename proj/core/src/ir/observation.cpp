#include "netcarta/ir/observation.hpp"

#include <algorithm>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta {

void validate(const Observation& obs) {
  if (!obs.mac && !obs.ip) {
    throw ValidationError("observation from '" + obs.source + "' has neither mac nor ip");
  }
  if (obs.mac && !normalize_mac(*obs.mac)) {
    throw ValidationError("observation mac '" + *obs.mac + "' is not a 48-bit hex address");
  }
  if (obs.ip && !Ipv4Address::parse(*obs.ip)) {
    throw ValidationError("observation ip '" + *obs.ip + "' is not a dotted quad");
  }
  if (obs.prefix_len && (*obs.prefix_len < 0 || *obs.prefix_len > 32)) {
    throw ValidationError("observation prefix length " + std::to_string(*obs.prefix_len) +
                          " outside [0,32]");
  }
  if (obs.network_hint && !Cidr::try_parse(*obs.network_hint)) {
    throw ValidationError("observation network hint '" + *obs.network_hint +
                          "' is not a CIDR");
  }
  for (int port : obs.ports) {
    if (port < 1 || port > 65535) {
      throw ValidationError("observation port " + std::to_string(port) +
                            " outside [1,65535]");
    }
  }
}

Observation normalized(const Observation& obs) {
  validate(obs);
  Observation out = obs;
  if (out.mac) out.mac = normalize_mac(*out.mac);
  std::sort(out.ports.begin(), out.ports.end());
  out.ports.erase(std::unique(out.ports.begin(), out.ports.end()), out.ports.end());
  std::sort(out.services.begin(), out.services.end());
  out.services.erase(std::unique(out.services.begin(), out.services.end()),
                     out.services.end());
  if (out.hostname && out.hostname->empty()) out.hostname.reset();
  if (out.os && out.os->empty()) out.os.reset();
  return out;
}

void to_json(nlohmann::json& j, const Observation& obs) {
  j = nlohmann::json::object();
  j["source"] = obs.source;
  if (obs.mac) j["mac"] = *obs.mac;
  if (obs.ip) j["ip"] = *obs.ip;
  if (obs.prefix_len) j["prefix_len"] = *obs.prefix_len;
  if (obs.hostname) j["hostname"] = *obs.hostname;
  if (obs.os) j["os"] = *obs.os;
  if (!obs.ports.empty()) j["ports"] = obs.ports;
  if (!obs.services.empty()) j["services"] = obs.services;
  if (obs.network_hint) j["network_hint"] = *obs.network_hint;
  if (obs.dhcp) j["dhcp"] = true;
}

namespace {

template <typename T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

void from_json(const nlohmann::json& j, Observation& obs) {
  if (!j.is_object()) throw ParseError("observation must be a JSON object");
  try {
    obs = Observation{};
    obs.source = j.value("source", "");
    obs.mac = optional_field<std::string>(j, "mac");
    obs.ip = optional_field<std::string>(j, "ip");
    obs.prefix_len = optional_field<int>(j, "prefix_len");
    obs.hostname = optional_field<std::string>(j, "hostname");
    obs.os = optional_field<std::string>(j, "os");
    obs.ports = j.value("ports", std::vector<int>{});
    obs.services = j.value("services", std::vector<std::string>{});
    obs.network_hint = optional_field<std::string>(j, "network_hint");
    if (auto it = j.find("dhcp"); it != j.end()) {
      obs.dhcp = it->is_boolean() ? it->get<bool>() : it->get<std::string>() == "true";
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed observation: ") + e.what());
  }
}

}  // namespace netcarta
