#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Straightforward wire-format encoders used to build test captures. They are
// written independently of the decoders under test and favour clarity.
namespace netcarta::testing {

using Frame = std::vector<std::uint8_t>;
using MacBytes = std::array<std::uint8_t, 6>;
using Ip4Bytes = std::array<std::uint8_t, 4>;

MacBytes mac(std::string_view text);  // "aa:bb:cc:dd:ee:ff"
Ip4Bytes ip4(std::string_view text);  // "10.0.0.1"

inline constexpr MacBytes kBroadcast{0xff, 0xff, 0xff, 0xff, 0xff, 0xff};

Frame ethernet(const MacBytes& dst, const MacBytes& src, std::uint16_t ethertype,
               const Frame& payload);
Frame ipv4(const Ip4Bytes& src, const Ip4Bytes& dst, std::uint8_t protocol, const Frame& payload,
           std::uint8_t ttl = 64, bool dont_fragment = false);
Frame udp(std::uint16_t src_port, std::uint16_t dst_port, const Frame& payload);
Frame tcp(std::uint16_t src_port, std::uint16_t dst_port, std::uint8_t flags,
          std::uint16_t window, const Frame& options);

Frame arp_frame(std::uint16_t opcode, std::string_view sender_mac, std::string_view sender_ip,
                std::string_view target_mac, std::string_view target_ip);

struct DhcpSpec {
  std::uint8_t message_type = 5;  // ACK
  std::string chaddr;
  std::string yiaddr = "0.0.0.0";
  std::string server_ip = "10.0.0.1";
  std::optional<std::string> netmask;
  std::optional<std::string> hostname;
};
Frame dhcp_frame(const DhcpSpec& spec);

struct DnsRecord {
  enum class Type { a, ptr, srv } type;
  std::string owner;
  std::string value;  // ip for A, target name for PTR/SRV
};
// mDNS message from `src`. `response` false builds a query carrying the
// records' owners as questions. `compress` makes the second and later owner
// names point back at the first one when they share it.
Frame mdns_frame(std::string_view src_mac, std::string_view src_ip,
                 const std::vector<DnsRecord>& records, bool response = true,
                 bool compress = false);

Frame icmp_frame(std::uint8_t type, std::string_view src_mac, std::string_view src_ip,
                 std::string_view dst_ip);

struct TcpOption {
  std::uint8_t kind;
  std::vector<std::uint8_t> data;
};
Frame tcp_options(const std::vector<TcpOption>& options);  // padded to 4 bytes with EOL
TcpOption opt_mss(std::uint16_t mss);
TcpOption opt_ws(std::uint8_t shift);
TcpOption opt_sok();
TcpOption opt_ts();
TcpOption opt_nop();

Frame syn_frame(std::string_view src_mac, std::string_view src_ip, std::uint8_t ttl,
                std::uint16_t window, const Frame& options, bool df = true,
                std::uint8_t flags = 0x02);

Frame ipv6_frame(std::string_view src_mac);

// Classic pcap with microsecond timestamps.
std::vector<std::uint8_t> pcap_file(const std::vector<Frame>& frames, bool little_endian = true,
                                    std::uint32_t link_type = 1);

}  // namespace netcarta::testing
