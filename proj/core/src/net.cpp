#include "netcarta/net.hpp"

#include <charconv>
#include <cstdio>

#include "netcarta/error.hpp"

namespace netcarta {

std::optional<Ipv4Address> Ipv4Address::parse(std::string_view text) {
  std::uint32_t value = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    if (p == end || *p < '0' || *p > '9') return std::nullopt;
    unsigned part = 0;
    auto [next, ec] = std::from_chars(p, end, part);
    if (ec != std::errc{} || part > 255 || next - p > 3) return std::nullopt;
    p = next;
    value = (value << 8) | part;
  }
  if (p != end) return std::nullopt;
  return Ipv4Address(value);
}

Ipv4Address Ipv4Address::from_bytes(std::span<const std::uint8_t, 4> b) {
  return Ipv4Address((std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
                     (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]});
}

std::string Ipv4Address::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (value_ >> 24) & 0xff,
                (value_ >> 16) & 0xff, (value_ >> 8) & 0xff, value_ & 0xff);
  return buf;
}

Ipv4Address netmask_from_prefix(int prefix) {
  if (prefix <= 0) return Ipv4Address(0);
  if (prefix >= 32) return Ipv4Address(0xffffffffu);
  return Ipv4Address(~((std::uint32_t{1} << (32 - prefix)) - 1));
}

std::optional<int> prefix_from_netmask(Ipv4Address mask) {
  const std::uint32_t m = mask.value();
  const std::uint32_t inverted = ~m;
  // Contiguous iff the inverted mask is of the form 0...01...1.
  if ((inverted & (inverted + 1)) != 0) return std::nullopt;
  return __builtin_popcount(m);
}

std::optional<Cidr> Cidr::try_parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto address = Ipv4Address::parse(text.substr(0, slash));
  if (!address) return std::nullopt;
  const auto prefix_text = text.substr(slash + 1);
  if (prefix_text.empty() || prefix_text.size() > 2) return std::nullopt;
  int prefix = 0;
  auto [next, ec] = std::from_chars(prefix_text.data(),
                                    prefix_text.data() + prefix_text.size(), prefix);
  if (ec != std::errc{} || next != prefix_text.data() + prefix_text.size()) {
    return std::nullopt;
  }
  if (prefix < 0 || prefix > 32) return std::nullopt;
  return Cidr{*address, prefix};
}

Cidr Cidr::parse(std::string_view text) {
  if (auto cidr = try_parse(text)) return *cidr;
  throw ParseError("malformed CIDR '" + std::string(text) + "'");
}

Cidr Cidr::canonical() const {
  return Cidr{Ipv4Address(address.value() & netmask_from_prefix(prefix).value()),
              prefix};
}

bool Cidr::contains(Ipv4Address ip) const {
  const auto mask = netmask_from_prefix(prefix).value();
  return (ip.value() & mask) == (address.value() & mask);
}

std::string Cidr::to_string() const {
  return address.to_string() + "/" + std::to_string(prefix);
}

std::string_view address_part(std::string_view ip_or_cidr) {
  return ip_or_cidr.substr(0, ip_or_cidr.find('/'));
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<std::string> normalize_mac(std::string_view text) {
  if (text.size() != 17) return std::nullopt;
  std::array<std::uint8_t, 6> bytes{};
  const char separator = text[2];
  if (separator != ':' && separator != '-') return std::nullopt;
  for (int i = 0; i < 6; ++i) {
    const auto hi = hex_value(text[i * 3]);
    const auto lo = hex_value(text[i * 3 + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    if (i < 5 && text[i * 3 + 2] != separator) return std::nullopt;
    bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return format_mac(bytes);
}

bool is_canonical_mac(std::string_view text) {
  auto normalized = normalize_mac(text);
  return normalized && *normalized == text;
}

std::string format_mac(std::span<const std::uint8_t, 6> b) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", b[0], b[1], b[2],
                b[3], b[4], b[5]);
  return buf;
}

}  // namespace netcarta
