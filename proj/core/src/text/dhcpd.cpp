#include "netcarta/text/dhcpd.hpp"

#include "netcarta/error.hpp"
#include "netcarta/net.hpp"

namespace netcarta::text {

namespace {

constexpr std::string_view kMarker = "DHCPACK on ";

bool is_space(char c) { return c == ' ' || c == '\t'; }

// Next whitespace-delimited token; advances `rest` past it.
std::string_view next_token(std::string_view& rest) {
  std::size_t start = 0;
  while (start < rest.size() && is_space(rest[start])) ++start;
  std::size_t end = start;
  while (end < rest.size() && !is_space(rest[end])) ++end;
  auto token = rest.substr(start, end - start);
  rest.remove_prefix(end);
  return token;
}

std::optional<Observation> parse_ack(std::string_view line, int hint_prefix) {
  const auto marker = line.find(kMarker);
  if (marker == std::string_view::npos) return std::nullopt;
  auto rest = line.substr(marker + kMarker.size());

  const auto ip = Ipv4Address::parse(next_token(rest));
  if (!ip || next_token(rest) != "to") return std::nullopt;
  auto mac = normalize_mac(next_token(rest));
  if (!mac) return std::nullopt;

  std::optional<std::string> hostname;
  auto lookahead = rest;
  auto token = next_token(lookahead);
  if (token.starts_with("(")) {
    // Client-supplied names may contain spaces; the segment ends at the last
    // ')' before " via ".
    const auto via = rest.find(") via ");
    if (via == std::string_view::npos) return std::nullopt;
    const auto open = rest.find('(');
    hostname = std::string(rest.substr(open + 1, via - open - 1));
    rest.remove_prefix(via + 1);
    if (hostname->empty()) hostname.reset();
  }
  if (next_token(rest) != "via") return std::nullopt;
  const auto gateway_text = next_token(rest);
  if (gateway_text.empty()) return std::nullopt;

  const auto anchor = Ipv4Address::parse(gateway_text).value_or(*ip);
  Observation obs;
  obs.source = "dhcpd-log";
  obs.ip = ip->to_string();
  obs.mac = std::move(mac);
  obs.hostname = std::move(hostname);
  obs.dhcp = true;
  obs.network_hint = Cidr{anchor, hint_prefix}.canonical().to_string();
  return obs;
}

}  // namespace

DhcpdParseResult parse_dhcpd_log(std::string_view text, int hint_prefix) {
  if (hint_prefix < 1 || hint_prefix > 32) {
    throw ConfigError("dhcpd hint prefix must be in [1,32]");
  }
  DhcpdParseResult result;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    auto line = text.substr(0, newline);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto obs = parse_ack(line, hint_prefix)) {
      result.observations.push_back(std::move(*obs));
    } else if (!line.empty()) {
      ++result.skipped_lines;
    }
    if (newline == std::string_view::npos) break;
    text.remove_prefix(newline + 1);
  }
  return result;
}

}  // namespace netcarta::text
