#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace netcarta {

class Ipv4Address {
 public:
  constexpr Ipv4Address() = default;
  constexpr explicit Ipv4Address(std::uint32_t host_order) : value_(host_order) {}

  // Strict dotted-quad: four decimal octets, no leading '+', no whitespace.
  static std::optional<Ipv4Address> parse(std::string_view text);
  static Ipv4Address from_bytes(std::span<const std::uint8_t, 4> bytes);

  constexpr std::uint32_t value() const { return value_; }
  std::string to_string() const;

  auto operator<=>(const Ipv4Address&) const = default;

 private:
  std::uint32_t value_ = 0;
};

// Prefix length -> netmask. prefix must be in [0, 32].
Ipv4Address netmask_from_prefix(int prefix);

// Netmask -> prefix length; nullopt for non-contiguous masks.
std::optional<int> prefix_from_netmask(Ipv4Address mask);

struct Cidr {
  Ipv4Address address;
  int prefix = 32;

  // Throws ParseError naming the offending text.
  static Cidr parse(std::string_view text);
  static std::optional<Cidr> try_parse(std::string_view text);

  // Host bits zeroed: 10.0.0.5/24 -> 10.0.0.0/24.
  Cidr canonical() const;
  bool contains(Ipv4Address ip) const;
  std::string to_string() const;

  auto operator<=>(const Cidr&) const = default;
};

// "10.0.0.1/24" -> "10.0.0.1"; text without '/' is returned unchanged.
std::string_view address_part(std::string_view ip_or_cidr);

// Lowercase colon-separated hex. Accepts ':' or '-' separators and any case.
std::optional<std::string> normalize_mac(std::string_view text);
bool is_canonical_mac(std::string_view text);
std::string format_mac(std::span<const std::uint8_t, 6> bytes);

}  // namespace netcarta
