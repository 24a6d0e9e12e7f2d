#include "netcarta/emit/dedup.hpp"

#include <map>
#include <optional>
#include <set>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::emit {

DedupMode parse_dedup_mode(std::string_view text) {
  if (text == "drop") return DedupMode::drop;
  if (text == "suffix") return DedupMode::suffix;
  if (text == "off") return DedupMode::off;
  throw ConfigError("unknown dedup mode '" + std::string(text) + "' (expected drop, suffix or off)");
}

std::string_view to_string(DedupMode mode) {
  switch (mode) {
    case DedupMode::drop: return "drop";
    case DedupMode::suffix: return "suffix";
    case DedupMode::off: return "off";
  }
  return "drop";
}

namespace {

std::set<std::string> ips_of(const Endpoint& endpoint) {
  std::set<std::string> ips;
  for (const auto& edge : endpoint.edges) {
    if (auto ip = lookup(edge.data, keys::ip); !ip.empty()) ips.emplace(address_part(ip));
  }
  return ips;
}

}  // namespace

std::vector<Diagnostic> dedup(Experiment& experiment, DedupMode mode) {
  std::vector<Diagnostic> out;
  if (mode == DedupMode::off) return out;

  std::map<std::string, Id> ip_owner;
  std::map<std::string, Id> hostname_owner;
  std::vector<Id> dropped;
  std::vector<Id> to_rename;

  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    const auto ips = ips_of(endpoint);
    std::optional<std::pair<std::string, Id>> ip_clash;
    for (const auto& ip : ips) {
      if (auto it = ip_owner.find(ip); it != ip_owner.end()) {
        ip_clash = {ip, it->second};
        break;
      }
    }
    if (ip_clash) {
      out.push_back({Severity::warning, "D1",
                     "dropped: ip " + ip_clash->first + " already used by node " +
                         ip_clash->second.to_string(),
                     {nid, ip_clash->second}});
      dropped.push_back(nid);
      continue;
    }
    const std::string host(lookup(endpoint.data, keys::hostname));
    if (!host.empty()) {
      if (auto it = hostname_owner.find(host); it != hostname_owner.end()) {
        if (mode == DedupMode::drop) {
          out.push_back({Severity::warning, "D2",
                         "dropped: hostname '" + host + "' already used by node " +
                             it->second.to_string(),
                         {nid, it->second}});
          dropped.push_back(nid);
          continue;
        }
        to_rename.push_back(nid);
      } else {
        hostname_owner.emplace(host, nid);
      }
    }
    for (const auto& ip : ips) ip_owner.emplace(ip, nid);
  }

  for (Id nid : dropped) experiment.remove_endpoint(nid);

  // Renames run after every original hostname is known, so a generated name
  // never collides with a later endpoint's own hostname.
  std::set<std::string> taken;
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    if (auto host = lookup(endpoint.data, keys::hostname); !host.empty()) taken.emplace(host);
  }
  std::map<std::string, int> next_suffix;
  for (Id nid : to_rename) {
    auto& data = experiment.mutable_data(nid);
    const std::string host(lookup(data, keys::hostname));
    int& k = next_suffix[host];
    std::string candidate;
    do {
      candidate = host + "-" + std::to_string(++k);
    } while (taken.contains(candidate));
    taken.insert(candidate);
    data[std::string(keys::hostname)] = candidate;
    out.push_back({Severity::info, "D3", "renamed hostname '" + host + "' to '" + candidate + "'",
                   {nid, hostname_owner.at(host)}});
  }
  return out;
}

}  // namespace netcarta::emit
