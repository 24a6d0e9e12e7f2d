#include "netcarta/packet/reconcile.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::packet {

ConflictMode parse_conflict_mode(std::string_view text) {
  if (text == "drop") return ConflictMode::drop;
  if (text == "keep-first") return ConflictMode::keep_first;
  if (text == "keep-last") return ConflictMode::keep_last;
  throw ConfigError("unknown conflict mode '" + std::string(text) +
                    "' (expected drop, keep-first or keep-last)");
}

std::string_view to_string(ConflictMode mode) {
  switch (mode) {
    case ConflictMode::drop: return "drop";
    case ConflictMode::keep_first: return "keep-first";
    case ConflictMode::keep_last: return "keep-last";
  }
  return "drop";
}

std::string subnet_key(const Observation& obs) {
  if (obs.ip && obs.prefix_len) {
    if (auto ip = Ipv4Address::parse(*obs.ip)) {
      return Cidr{*ip, *obs.prefix_len}.canonical().to_string();
    }
  }
  if (obs.network_hint) {
    if (auto cidr = Cidr::try_parse(*obs.network_hint)) return cidr->canonical().to_string();
    return *obs.network_hint;
  }
  return "unknown";
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ReconcileResult reconcile(std::span<const Observation> observations, ConflictMode mode) {
  const std::size_t n = observations.size();

  std::map<std::string, std::vector<std::size_t>> by_mac;
  std::map<std::string, std::vector<std::size_t>> by_ip;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> static_ips;
  std::map<std::string, std::set<std::string>> macs_of_ip;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& obs = observations[i];
    if (obs.mac) by_mac[*obs.mac].push_back(i);
    if (obs.ip) by_ip[*obs.ip].push_back(i);
    if (obs.mac && obs.ip) {
      macs_of_ip[*obs.ip].insert(*obs.mac);
      if (!obs.dhcp) static_ips[{*obs.mac, subnet_key(obs)}].insert(*obs.ip);
    }
  }

  DisjointSets sets(n);
  std::vector<bool> conflicted(n, false);
  std::map<std::size_t, std::set<std::string>> reasons;
  auto mark_group = [&](const std::vector<std::size_t>& members, const std::string& reason) {
    for (std::size_t m : members) {
      conflicted[m] = true;
      sets.unite(members.front(), m);
    }
    reasons[members.front()].insert(reason);
  };
  for (const auto& [key, ips] : static_ips) {
    if (ips.size() < 2) continue;
    std::string reason = "mac " + key.first + " has ips";
    for (const auto& ip : ips) reason += " " + ip;
    mark_group(by_mac[key.first], reason + " in " + key.second);
  }
  for (const auto& [ip, macs] : macs_of_ip) {
    if (macs.size() < 2) continue;
    std::string reason = "ip " + ip + " claimed by macs";
    for (const auto& mac : macs) reason += " " + mac;
    mark_group(by_ip[ip], reason);
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (conflicted[i]) groups[sets.find(i)].push_back(i);
  }
  std::map<std::size_t, std::set<std::string>> group_reasons;
  for (auto& [first, rs] : reasons) {
    group_reasons[sets.find(first)].merge(rs);
  }

  ReconcileResult out;
  std::vector<bool> keep(n, true);
  for (const auto& [root, members] : groups) {
    for (std::size_t m : members) keep[m] = false;
    std::optional<std::size_t> witness;
    if (mode == ConflictMode::keep_first) witness = members.front();
    if (mode == ConflictMode::keep_last) witness = members.back();
    if (witness) keep[*witness] = true;

    std::string message;
    for (const auto& r : group_reasons[root]) {
      if (!message.empty()) message += "; ";
      message += r;
    }
    message += witness ? "; kept observation #" + std::to_string(*witness)
                       : "; dropped " + std::to_string(members.size()) + " observation(s)";
    message += " [";
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto& obs = observations[members[k]];
      if (k > 0) message += ", ";
      message += "#" + std::to_string(members[k]) + " " + obs.source + " " +
                 obs.mac.value_or("-") + " " + obs.ip.value_or("-");
    }
    message += "]";
    Diagnostic d{Severity::warning, "P3", std::move(message), {}};
    out.diagnostics.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.observations.push_back(observations[i]);
  }
  return out;
}

}  // namespace netcarta::packet
