#include "netcarta/text/traceroute.hpp"

#include <charconv>
#include <map>
#include <cstdlib>
#include <sstream>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::text {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

std::optional<double> parse_double(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') return std::nullopt;
  return value;
}

// Parses the portion after the hop number. Returns false when nothing
// recognizable is present.
bool parse_hop_body(const std::vector<std::string>& toks, HopRecord& hop) {
  std::size_t i = 1;
  bool any = false;
  while (i < toks.size()) {
    const auto& tok = toks[i];
    if (tok == "*") {
      any = true;
      ++i;
      continue;
    }
    if (tok == "ms") {
      ++i;
      continue;
    }
    if (tok.front() == '!') {  // !H, !N annotations
      ++i;
      continue;
    }
    if (auto rtt = parse_double(tok)) {
      if (!hop.rtt_ms && i + 1 < toks.size() && toks[i + 1] == "ms") hop.rtt_ms = *rtt;
      ++i;
      any = true;
      continue;
    }
    if (tok.size() > 2 && tok.ends_with("ms")) {
      if (auto rtt = parse_double(tok.substr(0, tok.size() - 2)); rtt && !hop.rtt_ms) hop.rtt_ms = *rtt;
      ++i;
      any = true;
      continue;
    }
    // host (ip) | ip | (ip)
    std::string host = tok;
    std::optional<std::string> ip;
    if (i + 1 < toks.size() && toks[i + 1].size() > 2 && toks[i + 1].front() == '(' &&
        toks[i + 1].back() == ')') {
      ip = toks[i + 1].substr(1, toks[i + 1].size() - 2);
      i += 2;
    } else if (host.size() > 2 && host.front() == '(' && host.back() == ')') {
      ip = host.substr(1, host.size() - 2);
      host.clear();
      ++i;
    } else {
      ip = host;
      host.clear();
      ++i;
    }
    if (!Ipv4Address::parse(*ip)) return false;
    if (!hop.ip) {
      hop.ip = *ip;
      if (!host.empty() && host != *ip) hop.hostname = host;
    }
    any = true;
  }
  return any;
}

}  // namespace

TracerouteParseResult parse_traceroute(std::string_view text) {
  TracerouteParseResult result;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  int last_index = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "traceroute" || toks[0] == "tracert") continue;
    int index = 0;
    auto [p, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), index);
    HopRecord hop;
    hop.hop_index = index;
    if (ec != std::errc{} || p != toks[0].data() + toks[0].size() || index < 1 ||
        !parse_hop_body(toks, hop)) {
      result.diagnostics.push_back(Diagnostic{Severity::warning, "P7",
                                              "line " + std::to_string(line_no) +
                                                  ": unparseable hop line '" + line + "'",
                                              {}});
      continue;
    }
    if (index <= last_index) {
      result.diagnostics.push_back(Diagnostic{Severity::warning, "P7",
                                              "line " + std::to_string(line_no) +
                                                  ": hop index " + std::to_string(index) +
                                                  " does not increase",
                                              {}});
      continue;
    }
    last_index = index;
    result.hops.push_back(std::move(hop));
  }
  return result;
}

namespace {

std::optional<Id> endpoint_with_address(const Experiment& experiment, std::string_view ip) {
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    for (const auto& edge : endpoint.edges) {
      if (address_part(lookup(edge.data, keys::ip)) == ip) return nid;
    }
  }
  return std::nullopt;
}

Id hop_network(Experiment& experiment, const HopRecord& from, const HopRecord& to) {
  const auto link = *from.ip + "-" + *to.ip;
  for (const auto& [nid, network] : experiment.networks()) {
    if (lookup(network.data, "link") == link) return nid;
  }
  return experiment.add_network(MetadataMap{
      {std::string(keys::name), "hopnet-" + std::to_string(from.hop_index)},
      {"link", link}});
}

void attach(Experiment& experiment, Id endpoint, Id network, const std::string& ip) {
  auto edges = experiment.find_endpoint(endpoint)->edges;
  for (const auto& edge : edges) {
    if (edge.network == network && lookup(edge.data, keys::ip) == ip) return;
  }
  edges.push_back(Edge{network, {{std::string(keys::ip), ip}}});
  experiment.set_edges(endpoint, std::move(edges));
}

}  // namespace

TraceIngestResult ingest_traceroute(Experiment& experiment, std::span<const HopRecord> hops) {
  std::vector<const HopRecord*> resolved;
  for (const auto& hop : hops) {
    if (!hop.ip) continue;
    if (!Ipv4Address::parse(*hop.ip)) {
      throw ValidationError("hop " + std::to_string(hop.hop_index) + ": bad ip '" + *hop.ip + "'");
    }
    resolved.push_back(&hop);
  }

  TraceIngestResult result;
  if (resolved.size() == 1) {
    // A lone resolved hop has no neighbour to share a link with.
    Observation obs;
    obs.source = "traceroute";
    obs.ip = *resolved[0]->ip;
    obs.hostname = resolved[0]->hostname;
    result.endpoints.push_back(experiment.upsert_endpoint(obs));
    return result;
  }
  std::map<std::string, Id, std::less<>> seen;
  for (const auto* hop : resolved) {
    if (auto it = seen.find(*hop->ip); it != seen.end()) {
      result.endpoints.push_back(it->second);
      continue;
    }
    auto existing = endpoint_with_address(experiment, *hop->ip);
    if (!existing) {
      MetadataMap data;
      if (hop->hostname) data[std::string(keys::hostname)] = *hop->hostname;
      existing = experiment.add_endpoint({}, std::move(data));
    }
    seen.emplace(*hop->ip, *existing);
    result.endpoints.push_back(*existing);
  }
  for (std::size_t i = 0; i + 1 < resolved.size(); ++i) {
    const Id network = hop_network(experiment, *resolved[i], *resolved[i + 1]);
    result.hop_networks.push_back(network);
    attach(experiment, result.endpoints[i], network, *resolved[i]->ip);
    attach(experiment, result.endpoints[i + 1], network, *resolved[i + 1]->ip);
  }
  return result;
}

void to_json(nlohmann::json& j, const HopRecord& hop) {
  j = nlohmann::json{{"hop", hop.hop_index}};
  if (hop.ip) j["ip"] = *hop.ip;
  if (hop.hostname) j["hostname"] = *hop.hostname;
  if (hop.rtt_ms) j["rtt_ms"] = *hop.rtt_ms;
}

void from_json(const nlohmann::json& j, HopRecord& hop) {
  hop = HopRecord{};
  hop.hop_index = j.at("hop").get<int>();
  if (auto it = j.find("ip"); it != j.end() && !it->is_null()) hop.ip = it->get<std::string>();
  if (auto it = j.find("hostname"); it != j.end() && !it->is_null()) {
    hop.hostname = it->get<std::string>();
  }
  if (auto it = j.find("rtt_ms"); it != j.end() && !it->is_null()) hop.rtt_ms = it->get<double>();
}

}  // namespace netcarta::text
