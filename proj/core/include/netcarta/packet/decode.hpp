#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "netcarta/net.hpp"

namespace netcarta::packet {

using Bytes = std::span<const std::uint8_t>;

inline constexpr std::uint16_t kEtherTypeIpv4 = 0x0800;
inline constexpr std::uint16_t kEtherTypeArp = 0x0806;
inline constexpr std::uint16_t kEtherTypeVlan = 0x8100;
inline constexpr std::uint16_t kEtherTypeIpv6 = 0x86dd;

inline constexpr std::uint8_t kProtoIcmp = 1;
inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;

struct EthernetFrame {
  std::array<std::uint8_t, 6> destination{};
  std::array<std::uint8_t, 6> source{};
  std::uint16_t ethertype = 0;  // after any 802.1Q tags
  Bytes payload;
};

struct Ipv4Packet {
  Ipv4Address source;
  Ipv4Address destination;
  std::uint8_t ttl = 0;
  std::uint8_t protocol = 0;
  bool dont_fragment = false;
  bool first_fragment = true;
  Bytes payload;
};

struct UdpDatagram {
  std::uint16_t source_port = 0;
  std::uint16_t destination_port = 0;
  Bytes payload;
};

namespace tcp_flags {
inline constexpr std::uint8_t fin = 0x01;
inline constexpr std::uint8_t syn = 0x02;
inline constexpr std::uint8_t rst = 0x04;
inline constexpr std::uint8_t psh = 0x08;
inline constexpr std::uint8_t ack = 0x10;
}  // namespace tcp_flags

struct TcpSegment {
  std::uint16_t source_port = 0;
  std::uint16_t destination_port = 0;
  std::uint8_t flags = 0;
  std::uint16_t window = 0;
  Bytes options;
  Bytes payload;
};

std::optional<EthernetFrame> decode_ethernet(Bytes frame);
// Validates version, header length and total length.
std::optional<Ipv4Packet> decode_ipv4(Bytes datagram);
std::optional<UdpDatagram> decode_udp(Bytes segment);
std::optional<TcpSegment> decode_tcp(Bytes segment);

// Convenience: Ethernet -> IPv4, nullopt when the frame carries anything else.
std::optional<Ipv4Packet> ipv4_of(Bytes frame);

inline std::uint16_t read_u16(Bytes b, std::size_t offset) {
  return static_cast<std::uint16_t>((b[offset] << 8) | b[offset + 1]);
}

inline std::uint32_t read_u32(Bytes b, std::size_t offset) {
  return (std::uint32_t{b[offset]} << 24) | (std::uint32_t{b[offset + 1]} << 16) |
         (std::uint32_t{b[offset + 2]} << 8) | std::uint32_t{b[offset + 3]};
}

// Text copied out of packets: invalid UTF-8 and control bytes become '?'.
std::string sanitize_text(Bytes raw);

}  // namespace netcarta::packet
