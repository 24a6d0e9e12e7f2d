#include "netcarta/packet/decode.hpp"

#include <algorithm>

namespace netcarta::packet {

std::optional<EthernetFrame> decode_ethernet(Bytes frame) {
  if (frame.size() < 14) return std::nullopt;
  EthernetFrame eth;
  std::copy_n(frame.begin(), 6, eth.destination.begin());
  std::copy_n(frame.begin() + 6, 6, eth.source.begin());
  std::size_t offset = 12;
  eth.ethertype = read_u16(frame, offset);
  offset += 2;
  // Up to two stacked VLAN tags (802.1Q / QinQ).
  for (int tags = 0; tags < 2 && (eth.ethertype == kEtherTypeVlan || eth.ethertype == 0x88a8);
       ++tags) {
    if (frame.size() < offset + 4) return std::nullopt;
    eth.ethertype = read_u16(frame, offset + 2);
    offset += 4;
  }
  eth.payload = frame.subspan(offset);
  return eth;
}

std::optional<Ipv4Packet> decode_ipv4(Bytes d) {
  if (d.size() < 20 || (d[0] >> 4) != 4) return std::nullopt;
  const std::size_t header_len = static_cast<std::size_t>(d[0] & 0x0f) * 4;
  const std::size_t total_len = read_u16(d, 2);
  if (header_len < 20 || total_len < header_len || d.size() < header_len) return std::nullopt;
  Ipv4Packet ip;
  const std::uint16_t fragment = read_u16(d, 6);
  ip.dont_fragment = (fragment & 0x4000) != 0;
  ip.first_fragment = (fragment & 0x1fff) == 0;
  ip.ttl = d[8];
  ip.protocol = d[9];
  ip.source = Ipv4Address(read_u32(d, 12));
  ip.destination = Ipv4Address(read_u32(d, 16));
  // Captures may be snapped short or carry Ethernet padding past total_len.
  const std::size_t end = std::min(d.size(), total_len);
  ip.payload = d.subspan(header_len, end - header_len);
  return ip;
}

std::optional<UdpDatagram> decode_udp(Bytes s) {
  if (s.size() < 8) return std::nullopt;
  UdpDatagram udp;
  udp.source_port = read_u16(s, 0);
  udp.destination_port = read_u16(s, 2);
  const std::size_t length = read_u16(s, 4);
  if (length < 8) return std::nullopt;
  udp.payload = s.subspan(8, std::min(s.size(), length) - 8);
  return udp;
}

std::optional<TcpSegment> decode_tcp(Bytes s) {
  if (s.size() < 20) return std::nullopt;
  const std::size_t header_len = static_cast<std::size_t>(s[12] >> 4) * 4;
  if (header_len < 20 || s.size() < header_len) return std::nullopt;
  TcpSegment tcp;
  tcp.source_port = read_u16(s, 0);
  tcp.destination_port = read_u16(s, 2);
  tcp.flags = s[13];
  tcp.window = read_u16(s, 14);
  tcp.options = s.subspan(20, header_len - 20);
  tcp.payload = s.subspan(header_len);
  return tcp;
}

std::optional<Ipv4Packet> ipv4_of(Bytes frame) {
  auto eth = decode_ethernet(frame);
  if (!eth || eth->ethertype != kEtherTypeIpv4) return std::nullopt;
  auto ip = decode_ipv4(eth->payload);
  if (!ip || !ip->first_fragment) return std::nullopt;
  return ip;
}

std::string sanitize_text(Bytes raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const std::uint8_t c = raw[i];
    std::size_t len = 0;
    if (c < 0x80) {
      out += (c < 0x20 || c == 0x7f) ? '?' : static_cast<char>(c);
      ++i;
      continue;
    }
    if ((c & 0xe0) == 0xc0 && c >= 0xc2) len = 2;
    else if ((c & 0xf0) == 0xe0) len = 3;
    else if ((c & 0xf8) == 0xf0 && c <= 0xf4) len = 4;
    bool valid = len > 0 && i + len <= raw.size();
    for (std::size_t k = 1; valid && k < len; ++k) valid = (raw[i + k] & 0xc0) == 0x80;
    if (valid && len == 3) {
      const unsigned cp = ((c & 0x0f) << 12) | ((raw[i + 1] & 0x3f) << 6);
      valid = cp >= 0x800 && !(cp >= 0xd800 && cp <= 0xdfff);
    }
    if (valid && len == 4) {
      const unsigned cp = ((c & 0x07) << 18) | ((raw[i + 1] & 0x3f) << 12);
      valid = cp >= 0x10000 && cp <= 0x10ffff;
    }
    if (!valid) {
      out += '?';
      ++i;
      continue;
    }
    out.append(reinterpret_cast<const char*>(raw.data() + i), len);
    i += len;
  }
  return out;
}

}  // namespace netcarta::packet
