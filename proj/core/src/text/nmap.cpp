#include "netcarta/text/nmap.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::text {

namespace pt = boost::property_tree;

std::string os_family(std::string_view os_name) {
  std::string lower(os_name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  auto has = [&](std::string_view needle) { return lower.find(needle) != std::string::npos; };
  if (has("windows") || has("microsoft")) return "windows";
  if (has("mac os") || has("macos") || has("os x") || has("darwin")) return "macos";
  if (has("linux")) return "linux";
  return "other";
}

namespace {

std::string attr(const pt::ptree& node, const char* name) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

int to_int(const std::string& text, int fallback) {
  int value = fallback;
  std::from_chars(text.data(), text.data() + text.size(), value);
  return value;
}

std::optional<Observation> parse_host(const pt::ptree& host) {
  const auto status = host.get_child_optional("status");
  if (!status || attr(*status, "state") != "up") return std::nullopt;

  Observation obs;
  obs.source = "nmap";
  for (const auto& [tag, child] : host) {
    if (tag != "address") continue;
    const auto type = attr(child, "addrtype");
    if (type == "ipv4" && !obs.ip) {
      obs.ip = attr(child, "addr");
    } else if (type == "mac" && !obs.mac) {
      obs.mac = normalize_mac(attr(child, "addr"));
    }
  }
  if (obs.ip && !Ipv4Address::parse(*obs.ip)) obs.ip.reset();
  if (!obs.ip && !obs.mac) return std::nullopt;

  if (auto names = host.get_child_optional("hostnames")) {
    for (const auto& [tag, child] : *names) {
      if (tag == "hostname" && !attr(child, "name").empty()) {
        obs.hostname = attr(child, "name");
        break;
      }
    }
  }

  if (auto os = host.get_child_optional("os")) {
    int best = -1;
    for (const auto& [tag, child] : *os) {
      if (tag != "osmatch") continue;
      const int accuracy = to_int(attr(child, "accuracy"), 0);
      if (accuracy > best) {
        best = accuracy;
        obs.os = os_family(attr(child, "name"));
      }
    }
  }

  if (auto ports = host.get_child_optional("ports")) {
    for (const auto& [tag, child] : *ports) {
      if (tag != "port") continue;
      const auto state = child.get_child_optional("state");
      if (!state || attr(*state, "state") != "open") continue;
      const int port = to_int(attr(child, "portid"), 0);
      if (port >= 1 && port <= 65535) obs.ports.push_back(port);
    }
    std::sort(obs.ports.begin(), obs.ports.end());
    obs.ports.erase(std::unique(obs.ports.begin(), obs.ports.end()), obs.ports.end());
  }
  return obs;
}

}  // namespace

std::vector<Observation> parse_nmap_xml(std::string_view xml) {
  pt::ptree tree;
  std::istringstream in{std::string(xml)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed nmap XML at line " + std::to_string(e.line()) + ": " +
                     e.message());
  }
  const auto run = tree.get_child_optional("nmaprun");
  if (!run) throw ParseError("malformed nmap XML at line 1: missing <nmaprun> root");

  std::vector<Observation> observations;
  for (const auto& [tag, child] : *run) {
    if (tag != "host") continue;
    if (auto obs = parse_host(child)) observations.push_back(std::move(*obs));
  }
  return observations;
}

}  // namespace netcarta::text
