#include "frames.hpp"

#include <cstdio>
#include <stdexcept>

namespace netcarta::testing {

namespace {

void put16(Frame& f, std::uint16_t v) {
  f.push_back(static_cast<std::uint8_t>(v >> 8));
  f.push_back(static_cast<std::uint8_t>(v));
}

void put32(Frame& f, std::uint32_t v) {
  put16(f, static_cast<std::uint16_t>(v >> 16));
  put16(f, static_cast<std::uint16_t>(v));
}

void put_le32(Frame& f, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) f.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le16(Frame& f, std::uint16_t v) {
  f.push_back(static_cast<std::uint8_t>(v));
  f.push_back(static_cast<std::uint8_t>(v >> 8));
}

template <std::size_t N>
void put(Frame& f, const std::array<std::uint8_t, N>& bytes) {
  f.insert(f.end(), bytes.begin(), bytes.end());
}

void append(Frame& f, const Frame& more) { f.insert(f.end(), more.begin(), more.end()); }

std::uint16_t checksum(const Frame& data, std::size_t from, std::size_t len) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < len; i += 2) {
    std::uint16_t word = static_cast<std::uint16_t>(data[from + i] << 8);
    if (i + 1 < len) word |= data[from + i + 1];
    sum += word;
  }
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

void put_name(Frame& f, std::string_view name) {
  std::size_t start = 0;
  while (start < name.size()) {
    std::size_t dot = name.find('.', start);
    if (dot == std::string_view::npos) dot = name.size();
    f.push_back(static_cast<std::uint8_t>(dot - start));
    f.insert(f.end(), name.begin() + static_cast<std::ptrdiff_t>(start),
             name.begin() + static_cast<std::ptrdiff_t>(dot));
    start = dot + 1;
  }
  f.push_back(0);
}

}  // namespace

MacBytes mac(std::string_view text) {
  MacBytes out{};
  unsigned v[6];
  if (std::sscanf(std::string(text).c_str(), "%x:%x:%x:%x:%x:%x", &v[0], &v[1], &v[2], &v[3],
                  &v[4], &v[5]) != 6) {
    throw std::invalid_argument("bad mac in test: " + std::string(text));
  }
  for (int i = 0; i < 6; ++i) out[i] = static_cast<std::uint8_t>(v[i]);
  return out;
}

Ip4Bytes ip4(std::string_view text) {
  Ip4Bytes out{};
  unsigned v[4];
  if (std::sscanf(std::string(text).c_str(), "%u.%u.%u.%u", &v[0], &v[1], &v[2], &v[3]) != 4) {
    throw std::invalid_argument("bad ip in test: " + std::string(text));
  }
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v[i]);
  return out;
}

Frame ethernet(const MacBytes& dst, const MacBytes& src, std::uint16_t ethertype,
               const Frame& payload) {
  Frame f;
  put(f, dst);
  put(f, src);
  put16(f, ethertype);
  append(f, payload);
  return f;
}

Frame ipv4(const Ip4Bytes& src, const Ip4Bytes& dst, std::uint8_t protocol, const Frame& payload,
           std::uint8_t ttl, bool dont_fragment) {
  Frame f;
  f.push_back(0x45);
  f.push_back(0);
  put16(f, static_cast<std::uint16_t>(20 + payload.size()));
  put16(f, 0x1234);
  put16(f, dont_fragment ? 0x4000 : 0);
  f.push_back(ttl);
  f.push_back(protocol);
  put16(f, 0);
  put(f, src);
  put(f, dst);
  const std::uint16_t sum = checksum(f, 0, 20);
  f[10] = static_cast<std::uint8_t>(sum >> 8);
  f[11] = static_cast<std::uint8_t>(sum);
  append(f, payload);
  return f;
}

Frame udp(std::uint16_t src_port, std::uint16_t dst_port, const Frame& payload) {
  Frame f;
  put16(f, src_port);
  put16(f, dst_port);
  put16(f, static_cast<std::uint16_t>(8 + payload.size()));
  put16(f, 0);
  append(f, payload);
  return f;
}

Frame tcp(std::uint16_t src_port, std::uint16_t dst_port, std::uint8_t flags,
          std::uint16_t window, const Frame& options) {
  Frame f;
  put16(f, src_port);
  put16(f, dst_port);
  put32(f, 1000);
  put32(f, 0);
  const std::size_t header = 20 + options.size();
  f.push_back(static_cast<std::uint8_t>((header / 4) << 4));
  f.push_back(flags);
  put16(f, window);
  put16(f, 0);
  put16(f, 0);
  append(f, options);
  return f;
}

Frame arp_frame(std::uint16_t opcode, std::string_view sender_mac, std::string_view sender_ip,
                std::string_view target_mac, std::string_view target_ip) {
  Frame body;
  put16(body, 1);
  put16(body, 0x0800);
  body.push_back(6);
  body.push_back(4);
  put16(body, opcode);
  put(body, mac(sender_mac));
  put(body, ip4(sender_ip));
  put(body, mac(target_mac));
  put(body, ip4(target_ip));
  const MacBytes dst = opcode == 1 ? kBroadcast : mac(target_mac);
  return ethernet(dst, mac(sender_mac), 0x0806, body);
}

Frame dhcp_frame(const DhcpSpec& spec) {
  Frame b;
  b.push_back(2);  // BOOTREPLY
  b.push_back(1);
  b.push_back(6);
  b.push_back(0);
  put32(b, 0xdeadbeef);
  put16(b, 0);
  put16(b, 0);
  put(b, Ip4Bytes{});
  put(b, ip4(spec.yiaddr));
  put(b, ip4(spec.server_ip));
  put(b, Ip4Bytes{});
  const MacBytes ch = mac(spec.chaddr);
  put(b, ch);
  b.resize(b.size() + 10 + 64 + 128, 0);  // chaddr padding, sname, file
  put32(b, 0x63825363);
  b.push_back(53);
  b.push_back(1);
  b.push_back(spec.message_type);
  if (spec.netmask) {
    b.push_back(1);
    b.push_back(4);
    put(b, ip4(*spec.netmask));
  }
  if (spec.hostname) {
    b.push_back(12);
    b.push_back(static_cast<std::uint8_t>(spec.hostname->size()));
    b.insert(b.end(), spec.hostname->begin(), spec.hostname->end());
  }
  b.push_back(255);
  const Frame ip = ipv4(ip4(spec.server_ip), ip4("255.255.255.255"), 17, udp(67, 68, b));
  return ethernet(kBroadcast, mac("02:00:00:00:00:fe"), 0x0800, ip);
}

Frame mdns_frame(std::string_view src_mac, std::string_view src_ip,
                 const std::vector<DnsRecord>& records, bool response, bool compress) {
  Frame m;
  put16(m, 0);
  put16(m, response ? 0x8400 : 0);
  put16(m, response ? 0 : static_cast<std::uint16_t>(records.size()));
  put16(m, response ? static_cast<std::uint16_t>(records.size()) : 0);
  put16(m, 0);
  put16(m, 0);
  std::optional<std::pair<std::string, std::size_t>> first_owner;
  for (const auto& r : records) {
    if (compress && first_owner && first_owner->first == r.owner) {
      put16(m, static_cast<std::uint16_t>(0xc000 | first_owner->second));
    } else {
      if (!first_owner) first_owner = {r.owner, m.size()};
      put_name(m, r.owner);
    }
    const std::uint16_t type =
        r.type == DnsRecord::Type::a ? 1 : r.type == DnsRecord::Type::ptr ? 12 : 33;
    put16(m, type);
    put16(m, 1);
    if (!response) continue;
    put32(m, 120);
    Frame rdata;
    if (r.type == DnsRecord::Type::a) {
      put(rdata, ip4(r.value));
    } else if (r.type == DnsRecord::Type::ptr) {
      put_name(rdata, r.value);
    } else {
      put16(rdata, 0);
      put16(rdata, 0);
      put16(rdata, 631);
      put_name(rdata, r.value);
    }
    put16(m, static_cast<std::uint16_t>(rdata.size()));
    append(m, rdata);
  }
  const Frame ip = ipv4(ip4(src_ip), ip4("224.0.0.251"), 17, udp(5353, 5353, m), 255);
  return ethernet(mac("01:00:5e:00:00:fb"), mac(src_mac), 0x0800, ip);
}

Frame icmp_frame(std::uint8_t type, std::string_view src_mac, std::string_view src_ip,
                 std::string_view dst_ip) {
  Frame body{type, 0, 0, 0, 0, 1, 0, 1, 'p', 'i', 'n', 'g'};
  const std::uint16_t sum = checksum(body, 0, body.size());
  body[2] = static_cast<std::uint8_t>(sum >> 8);
  body[3] = static_cast<std::uint8_t>(sum);
  return ethernet(mac("02:00:00:00:00:01"), mac(src_mac), 0x0800,
                  ipv4(ip4(src_ip), ip4(dst_ip), 1, body));
}

Frame tcp_options(const std::vector<TcpOption>& options) {
  Frame f;
  for (const auto& o : options) {
    f.push_back(o.kind);
    if (o.kind == 0 || o.kind == 1) continue;
    f.push_back(static_cast<std::uint8_t>(2 + o.data.size()));
    f.insert(f.end(), o.data.begin(), o.data.end());
  }
  while (f.size() % 4 != 0) f.push_back(0);
  return f;
}

TcpOption opt_mss(std::uint16_t mss) {
  return {2, {static_cast<std::uint8_t>(mss >> 8), static_cast<std::uint8_t>(mss)}};
}
TcpOption opt_ws(std::uint8_t shift) { return {3, {shift}}; }
TcpOption opt_sok() { return {4, {}}; }
TcpOption opt_ts() { return {8, {0, 0, 0, 1, 0, 0, 0, 0}}; }
TcpOption opt_nop() { return {1, {}}; }

Frame syn_frame(std::string_view src_mac, std::string_view src_ip, std::uint8_t ttl,
                std::uint16_t window, const Frame& options, bool df, std::uint8_t flags) {
  return ethernet(mac("02:00:00:00:00:01"), mac(src_mac), 0x0800,
                  ipv4(ip4(src_ip), ip4("10.0.0.254"), 6, tcp(40000, 80, flags, window, options),
                       ttl, df));
}

Frame ipv6_frame(std::string_view src_mac) {
  Frame body(40, 0);
  body[0] = 0x60;
  body[6] = 59;  // no next header
  body[7] = 64;
  return ethernet(mac("33:33:00:00:00:01"), mac(src_mac), 0x86dd, body);
}

std::vector<std::uint8_t> pcap_file(const std::vector<Frame>& frames, bool little_endian,
                                    std::uint32_t link_type) {
  Frame f;
  auto u32 = [&](std::uint32_t v) { little_endian ? put_le32(f, v) : put32(f, v); };
  auto u16 = [&](std::uint16_t v) { little_endian ? put_le16(f, v) : put16(f, v); };
  u32(0xa1b2c3d4);
  u16(2);
  u16(4);
  u32(0);
  u32(0);
  u32(65535);
  u32(link_type);
  std::uint32_t t = 1700000000;
  for (const auto& frame : frames) {
    u32(t++);
    u32(0);
    u32(static_cast<std::uint32_t>(frame.size()));
    u32(static_cast<std::uint32_t>(frame.size()));
    append(f, frame);
  }
  return f;
}

}  // namespace netcarta::testing
