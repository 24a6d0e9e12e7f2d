#include "netcarta/irtools/check.hpp"

#include <algorithm>
#include <map>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::irtools {

namespace {
const std::set<std::string> kKnownRules{"R1", "R2", "R3", "R4", "R5", "R6"};
}

void RuleConfig::validate() const {
  if (max_interfaces < 1) throw ConfigError("max_interfaces must be at least 1");
  for (const auto& code : enabled) {
    if (!kKnownRules.contains(code)) throw ConfigError("unknown rule code '" + code + "'");
  }
}

std::vector<Diagnostic> check(const Experiment& experiment, const RuleConfig& rules) {
  rules.validate();
  auto on = [&](const char* code) { return rules.enabled.contains(code); };
  std::vector<Diagnostic> out;

  std::map<std::pair<Id, std::string>, std::vector<Id>> holders_of_ip;
  std::map<std::string, std::vector<Id>> holders_of_hostname;
  std::set<Id> referenced;

  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    const auto edge_count = endpoint.edges.size();
    if (on("R1") && edge_count > static_cast<std::size_t>(rules.max_interfaces)) {
      out.push_back({Severity::error, "R1",
                     "endpoint has " + std::to_string(edge_count) +
                         " interfaces, more than the limit of " +
                         std::to_string(rules.max_interfaces) + "; physically unrealizable",
                     {nid}});
    }
    if (on("R3") && edge_count == 0) {
      out.push_back({Severity::warning, "R3", "endpoint has no interfaces", {nid}});
    }
    bool any_ip = false;
    for (const auto& edge : endpoint.edges) {
      referenced.insert(edge.network);
      auto ip = lookup(edge.data, keys::ip);
      if (ip.empty()) continue;
      any_ip = true;
      auto& holders = holders_of_ip[{edge.network, std::string(address_part(ip))}];
      if (holders.empty() || holders.back() != nid) holders.push_back(nid);
    }
    if (on("R5") && edge_count > 0 && !any_ip && lookup(endpoint.data, keys::dhcp) != "true") {
      out.push_back({Severity::error, "R5",
                     "endpoint has no ip address on any interface and is not configured for "
                     "DHCP; unbootable",
                     {nid}});
    }
    if (auto host = lookup(endpoint.data, keys::hostname); !host.empty()) {
      holders_of_hostname[std::string(host)].push_back(nid);
    }
  }

  if (on("R2")) {
    for (const auto& [key, holders] : holders_of_ip) {
      if (holders.size() < 2) continue;
      out.push_back({Severity::error, "R2",
                     "ip " + key.second + " is assigned to " + std::to_string(holders.size()) +
                         " endpoints on network " + key.first.to_string(),
                     holders});
    }
  }
  if (on("R4")) {
    for (const auto& [nid, network] : experiment.networks()) {
      if (!referenced.contains(nid)) {
        out.push_back({Severity::warning, "R4", "network has no attached endpoints", {nid}});
      }
    }
  }
  if (on("R6")) {
    for (const auto& [host, holders] : holders_of_hostname) {
      if (holders.size() < 2) continue;
      out.push_back({Severity::warning, "R6",
                     "hostname '" + host + "' is used by " + std::to_string(holders.size()) +
                         " endpoints",
                     holders});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.code != b.code) return a.code < b.code;
    const Id first_a = a.subjects.empty() ? Id{0} : a.subjects.front();
    const Id first_b = b.subjects.empty() ? Id{0} : b.subjects.front();
    return first_a < first_b;
  });
  return out;
}

}  // namespace netcarta::irtools
