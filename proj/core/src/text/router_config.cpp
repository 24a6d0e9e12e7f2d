#include "netcarta/text/router_config.hpp"

#include <map>
#include <set>
#include <sstream>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::text {

RouterDialect parse_dialect(std::string_view name) {
  if (name == "ios") return RouterDialect::ios;
  if (name == "junos-set") return RouterDialect::junos_set;
  throw ConfigError("unsupported router dialect '" + std::string(name) +
                    "' (expected ios or junos-set)");
}

std::string_view to_string(RouterDialect dialect) {
  return dialect == RouterDialect::ios ? "ios" : "junos-set";
}

namespace {

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

Diagnostic parser_note(std::string code, std::string message) {
  return Diagnostic{Severity::info, std::move(code), std::move(message), {}};
}

// Accepts "A.B.C.D M.M.M.M" or "A.B.C.D/P". Returns false with a reason.
bool parse_address(const std::vector<std::string>& args, RouterInterface& iface,
                   std::string& reason) {
  if (args.empty()) {
    reason = "missing address";
    return false;
  }
  if (auto cidr = Cidr::try_parse(args[0])) {
    iface.ip = cidr->address.to_string();
    iface.prefix_len = cidr->prefix;
  } else {
    auto address = Ipv4Address::parse(args[0]);
    auto mask = args.size() > 1 ? Ipv4Address::parse(args[1]) : std::nullopt;
    if (!address || !mask) {
      reason = "unparseable address '" + args[0] + "'";
      return false;
    }
    auto prefix = prefix_from_netmask(*mask);
    if (!prefix) {
      reason = "non-contiguous netmask " + args[1];
      return false;
    }
    iface.ip = address->to_string();
    iface.prefix_len = *prefix;
  }
  if (iface.prefix_len < 1) {
    reason = "prefix length 0 is not an interface subnet";
    return false;
  }
  return true;
}

struct PendingInterface {
  RouterInterface iface;
  bool has_address = false;
  bool shutdown = false;
};

RouterParseResult finish(std::string name, std::vector<std::string> order,
                         std::map<std::string, PendingInterface> pending,
                         std::vector<Diagnostic> diagnostics) {
  RouterParseResult result;
  result.spec.name = std::move(name);
  result.diagnostics = std::move(diagnostics);
  for (const auto& if_name : order) {
    const auto& p = pending.at(if_name);
    if (p.shutdown) {
      result.diagnostics.push_back(parser_note("P4", "interface " + if_name + " is shut down; skipped"));
    } else if (!p.has_address) {
      result.diagnostics.push_back(parser_note("P4", "interface " + if_name + " has no IPv4 address; skipped"));
    } else {
      result.spec.interfaces.push_back(p.iface);
    }
  }
  return result;
}

RouterParseResult parse_ios(std::string_view text) {
  std::string hostname;
  std::vector<std::string> order;
  std::map<std::string, PendingInterface> pending;
  std::vector<Diagnostic> diagnostics;
  PendingInterface* current = nullptr;

  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool indented = !line.empty() && (line[0] == ' ' || line[0] == '\t');
    auto toks = tokens(line);
    if (toks.empty() || toks[0].starts_with("!")) {
      if (!toks.empty()) current = nullptr;
      continue;
    }
    if (!indented) {
      current = nullptr;
      if (toks[0] == "hostname" && toks.size() >= 2) {
        hostname = toks[1];
        if (hostname.size() >= 2 && hostname.front() == '"' && hostname.back() == '"') {
          hostname = hostname.substr(1, hostname.size() - 2);
        }
      } else if (toks[0] == "interface" && toks.size() >= 2) {
        std::string if_name = toks[1];
        for (std::size_t i = 2; i < toks.size(); ++i) if_name += " " + toks[i];
        auto [it, inserted] = pending.try_emplace(if_name);
        if (inserted) {
          order.push_back(if_name);
          it->second.iface.name = if_name;
        }
        current = &it->second;
      }
      continue;
    }
    if (!current) continue;
    if (toks[0] == "shutdown") {
      current->shutdown = true;
    } else if (toks[0] == "no" && toks.size() >= 2 && toks[1] == "shutdown") {
      current->shutdown = false;
    } else if (toks[0] == "ip" && toks.size() >= 2 && toks[1] == "address") {
      std::vector<std::string> args(toks.begin() + 2, toks.end());
      if (!args.empty() && args.back() == "secondary") {
        diagnostics.push_back(parser_note(
            "P4", "interface " + current->iface.name + ": secondary address ignored"));
        continue;
      }
      std::string reason;
      RouterInterface iface = current->iface;
      if (parse_address(args, iface, reason)) {
        current->iface = iface;
        current->has_address = true;
      } else {
        diagnostics.push_back(parser_note("P4", "interface " + current->iface.name + ": " + reason));
      }
    } else if (toks[0] == "no" && toks.size() >= 3 && toks[1] == "ip" && toks[2] == "address") {
      current->has_address = false;
    }
  }
  return finish(std::move(hostname), std::move(order), std::move(pending), std::move(diagnostics));
}

RouterParseResult parse_junos_set(std::string_view text) {
  std::string hostname;
  std::vector<std::string> order;
  std::map<std::string, PendingInterface> pending;
  std::set<std::string> disabled;
  std::vector<Diagnostic> diagnostics;

  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    auto toks = tokens(line);
    if (toks.size() < 3 || toks[0] != "set") continue;
    if (toks[1] == "system" && toks[2] == "host-name" && toks.size() >= 4) {
      hostname = toks[3];
      continue;
    }
    if (toks[1] != "interfaces" || toks.size() < 4) continue;
    const auto& physical = toks[2];
    if (toks[3] == "disable") {
      disabled.insert(physical);
      continue;
    }
    // set interfaces IF unit U family inet address A/P
    if (toks.size() >= 9 && toks[3] == "unit" && toks[5] == "family" && toks[6] == "inet" &&
        toks[7] == "address") {
      const std::string if_name = toks[4] == "0" ? physical : physical + "." + toks[4];
      auto [it, inserted] = pending.try_emplace(if_name);
      if (inserted) {
        order.push_back(if_name);
        it->second.iface.name = if_name;
      } else if (it->second.has_address) {
        diagnostics.push_back(parser_note("P4", "interface " + if_name + ": additional address " +
                                                    toks[8] + " ignored"));
        continue;
      }
      std::string reason;
      RouterInterface iface = it->second.iface;
      if (parse_address({toks[8]}, iface, reason)) {
        it->second.iface = iface;
        it->second.has_address = true;
      } else {
        diagnostics.push_back(parser_note("P4", "interface " + if_name + ": " + reason));
      }
    } else if (toks[3] == "unit" && toks.size() >= 5) {
      const std::string if_name = toks[4] == "0" ? physical : physical + "." + toks[4];
      if (pending.try_emplace(if_name).second) {
        order.push_back(if_name);
        pending[if_name].iface.name = if_name;
      }
    }
  }
  for (auto& [name, p] : pending) {
    const auto physical = name.substr(0, name.find('.'));
    if (disabled.contains(physical)) p.shutdown = true;
  }
  return finish(std::move(hostname), std::move(order), std::move(pending), std::move(diagnostics));
}

}  // namespace

RouterParseResult parse_router_config(std::string_view text, RouterDialect dialect) {
  switch (dialect) {
    case RouterDialect::ios: return parse_ios(text);
    case RouterDialect::junos_set: return parse_junos_set(text);
  }
  throw ConfigError("unsupported router dialect");
}

LinkResult link_routers(std::span<const RouterSpec> specs, Experiment& experiment) {
  std::set<std::string> names;
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    if (lookup(endpoint.data, keys::role) == "router") {
      names.insert(std::string(lookup(endpoint.data, keys::hostname)));
    }
  }
  for (const auto& spec : specs) {
    if (spec.name.empty()) throw ValidationError("router spec without a hostname");
    if (!names.insert(spec.name).second) {
      throw ValidationError("duplicate router hostname '" + spec.name + "'");
    }
    std::set<std::string> if_names;
    for (const auto& iface : spec.interfaces) {
      if (!if_names.insert(iface.name).second) {
        throw ValidationError("router " + spec.name + ": duplicate interface " + iface.name);
      }
      if (!Ipv4Address::parse(iface.ip) || iface.prefix_len < 1 || iface.prefix_len > 32) {
        throw ValidationError("router " + spec.name + ": bad address on " + iface.name);
      }
    }
  }

  LinkResult result;
  std::map<Id, std::size_t> interfaces_per_network;
  for (const auto& spec : specs) {
    std::vector<Edge> edges;
    for (const auto& iface : spec.interfaces) {
      const auto ip_text = iface.ip + "/" + std::to_string(iface.prefix_len);
      const Id network = experiment.network_for_subnet(ip_text);
      ++interfaces_per_network[network];
      Edge edge{network, {{std::string(keys::ip), ip_text}, {"interface", iface.name}}};
      edges.push_back(std::move(edge));
    }
    const Id router = experiment.add_endpoint(
        std::move(edges),
        MetadataMap{{std::string(keys::hostname), spec.name}, {std::string(keys::role), "router"}});
    result.routers.push_back(router);
    if (spec.interfaces.empty()) {
      result.diagnostics.push_back(
          Diagnostic{Severity::info, "P6", "router " + spec.name + " has no addressed interfaces", {router}});
    }
  }
  for (const auto& [network, count] : interfaces_per_network) {
    if (count == 1 && experiment.reference_count(network) == 1) {
      result.diagnostics.push_back(Diagnostic{
          Severity::info, "P5",
          "stub network " + std::string(lookup(experiment.find_network(network)->data, keys::subnet)) +
              " has a single router interface",
          {network}});
    }
  }
  return result;
}

void to_json(nlohmann::json& j, const RouterSpec& spec) {
  auto interfaces = nlohmann::json::array();
  for (const auto& iface : spec.interfaces) {
    interfaces.push_back({{"name", iface.name}, {"ip", iface.ip}, {"prefix_len", iface.prefix_len}});
  }
  j = nlohmann::json{{"name", spec.name}, {"interfaces", std::move(interfaces)}};
}

void from_json(const nlohmann::json& j, RouterSpec& spec) {
  spec = RouterSpec{};
  spec.name = j.at("name").get<std::string>();
  for (const auto& i : j.value("interfaces", nlohmann::json::array())) {
    spec.interfaces.push_back(RouterInterface{i.at("name").get<std::string>(),
                                              i.at("ip").get<std::string>(),
                                              i.at("prefix_len").get<int>()});
  }
}

}  // namespace netcarta::text
