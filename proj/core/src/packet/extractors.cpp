#include "netcarta/packet/extractors.hpp"

#include <algorithm>
#include <set>

namespace netcarta::packet {

namespace {

Diagnostic malformed(std::string what) {
  return Diagnostic{Severity::warning, "P1", std::move(what), {}};
}

std::string mac_of(Bytes bytes) {
  std::array<std::uint8_t, 6> mac{};
  std::copy_n(bytes.begin(), 6, mac.begin());
  return format_mac(mac);
}

std::string mac_of(const std::array<std::uint8_t, 6>& bytes) { return format_mac(bytes); }

std::optional<UdpDatagram> udp_of(const Ipv4Packet& ip) {
  if (ip.protocol != kProtoUdp) return std::nullopt;
  return decode_udp(ip.payload);
}

}  // namespace

Extraction extract_arp(Bytes frame) {
  Extraction out;
  auto eth = decode_ethernet(frame);
  if (!eth || eth->ethertype != kEtherTypeArp) return out;
  const auto body = eth->payload;
  if (body.size() < 8) {
    out.diagnostics.push_back(malformed("ARP body shorter than its fixed header"));
    return out;
  }
  const std::uint16_t hardware_type = read_u16(body, 0);
  const std::uint16_t protocol_type = read_u16(body, 2);
  const std::uint8_t hardware_len = body[4];
  const std::uint8_t protocol_len = body[5];
  const std::uint16_t opcode = read_u16(body, 6);
  if (hardware_type != 1 || protocol_type != kEtherTypeIpv4 || hardware_len != 6 ||
      protocol_len != 4) {
    out.diagnostics.push_back(malformed("ARP packet is not Ethernet/IPv4"));
    return out;
  }
  if (body.size() < 28) {
    out.diagnostics.push_back(malformed("ARP body truncated"));
    return out;
  }
  if (opcode != 2) return out;
  Observation obs;
  obs.source = "arp";
  obs.mac = mac_of(body.subspan(8, 6));
  obs.ip = Ipv4Address(read_u32(body, 14)).to_string();
  out.observation = std::move(obs);
  return out;
}

namespace {

constexpr std::uint16_t kDnsTypeA = 1;
constexpr std::uint16_t kDnsTypePtr = 12;
constexpr std::uint16_t kDnsTypeSrv = 33;

// DNS name at `offset` with compression pointers. Advances `offset` past the
// name in the original position. Returns nullopt on malformed input.
std::optional<std::string> read_name(Bytes msg, std::size_t& offset) {
  std::string name;
  std::size_t pos = offset;
  bool jumped = false;
  int jumps = 0;
  while (true) {
    if (pos >= msg.size()) return std::nullopt;
    const std::uint8_t len = msg[pos];
    if (len == 0) {
      if (!jumped) offset = pos + 1;
      break;
    }
    if ((len & 0xc0) == 0xc0) {
      if (pos + 1 >= msg.size() || ++jumps > 32) return std::nullopt;
      const std::size_t target = static_cast<std::size_t>((len & 0x3f) << 8) | msg[pos + 1];
      if (!jumped) offset = pos + 2;
      jumped = true;
      pos = target;
      continue;
    }
    if ((len & 0xc0) != 0 || pos + 1 + len > msg.size()) return std::nullopt;
    if (!name.empty()) name += '.';
    name += sanitize_text(msg.subspan(pos + 1, len));
    if (name.size() > 255) return std::nullopt;
    pos += 1 + len;
  }
  return name;
}

bool is_reverse_zone(std::string_view name) {
  return name.ends_with(".in-addr.arpa") || name.ends_with(".ip6.arpa");
}

}  // namespace

Extraction extract_mdns(Bytes frame) {
  Extraction out;
  auto eth = decode_ethernet(frame);
  auto ip = ipv4_of(frame);
  if (!eth || !ip) return out;
  auto udp = udp_of(*ip);
  if (!udp || (udp->source_port != 5353 && udp->destination_port != 5353)) return out;

  const auto msg = udp->payload;
  if (msg.size() < 12) {
    out.diagnostics.push_back(malformed("mDNS message shorter than the DNS header"));
    return out;
  }
  const bool response = (msg[2] & 0x80) != 0;
  const std::uint16_t questions = read_u16(msg, 4);
  const std::size_t records =
      std::size_t{read_u16(msg, 6)} + read_u16(msg, 8) + read_u16(msg, 10);
  if (!response || records == 0) return out;

  std::size_t offset = 12;
  for (std::uint16_t q = 0; q < questions; ++q) {
    if (!read_name(msg, offset) || offset + 4 > msg.size()) {
      out.diagnostics.push_back(malformed("undecodable mDNS question"));
      return out;
    }
    offset += 4;
  }

  std::set<std::string> services;
  std::optional<std::string> hostname;
  std::optional<std::string> address;
  for (std::size_t r = 0; r < records; ++r) {
    auto owner = read_name(msg, offset);
    if (!owner || offset + 10 > msg.size()) {
      out.diagnostics.push_back(malformed("undecodable mDNS resource record"));
      return out;
    }
    const std::uint16_t type = read_u16(msg, offset);
    const std::size_t rdlength = read_u16(msg, offset + 8);
    const std::size_t rdata = offset + 10;
    if (rdata + rdlength > msg.size()) {
      out.diagnostics.push_back(malformed("mDNS record data runs past the message"));
      return out;
    }
    if (type == kDnsTypeA && rdlength == 4 && !address) {
      address = Ipv4Address(read_u32(msg, rdata)).to_string();
      hostname = *owner;
    } else if (type == kDnsTypePtr && !is_reverse_zone(*owner)) {
      if (*owner == "_services._dns-sd._udp.local") {
        std::size_t target_offset = rdata;
        if (auto target = read_name(msg, target_offset)) services.insert(*target);
      } else {
        services.insert(*owner);
      }
    } else if (type == kDnsTypeSrv) {
      services.insert(*owner);
    }
    offset = rdata + rdlength;
  }
  if (services.empty() && !address) return out;

  Observation obs;
  obs.source = "mdns";
  obs.mac = mac_of(eth->source);
  obs.ip = address ? *address : ip->source.to_string();
  obs.hostname = hostname;
  obs.services.assign(services.begin(), services.end());
  out.observation = std::move(obs);
  return out;
}

Extraction extract_dhcp(Bytes frame) {
  Extraction out;
  auto ip = ipv4_of(frame);
  if (!ip) return out;
  auto udp = udp_of(*ip);
  if (!udp) return out;
  const bool bootp = (udp->source_port == 67 || udp->source_port == 68) &&
                     (udp->destination_port == 67 || udp->destination_port == 68);
  if (!bootp) return out;

  const auto msg = udp->payload;
  constexpr std::size_t kOptions = 240;
  if (msg.size() < kOptions || read_u32(msg, 236) != 0x63825363) {
    out.diagnostics.push_back(malformed("BOOTP message truncated or missing the DHCP cookie"));
    return out;
  }
  std::optional<std::uint8_t> message_type;
  std::optional<int> prefix;
  std::optional<std::string> hostname;
  std::size_t pos = kOptions;
  bool ended = false;
  while (pos < msg.size()) {
    const std::uint8_t code = msg[pos];
    if (code == 0) {
      ++pos;
      continue;
    }
    if (code == 255) {
      ended = true;
      break;
    }
    if (pos + 1 >= msg.size() || pos + 2 + msg[pos + 1] > msg.size()) {
      out.diagnostics.push_back(malformed("DHCP option " + std::to_string(code) + " truncated"));
      return out;
    }
    const std::uint8_t len = msg[pos + 1];
    const auto value = msg.subspan(pos + 2, len);
    if (code == 53 && len == 1) {
      message_type = value[0];
    } else if (code == 1 && len == 4) {
      prefix = prefix_from_netmask(Ipv4Address(read_u32(value, 0)));
    } else if (code == 12 && len > 0) {
      hostname = sanitize_text(value);
    }
    pos += 2 + len;
  }
  if (!ended && !message_type) {
    out.diagnostics.push_back(malformed("DHCP options end without a message type"));
    return out;
  }
  if (message_type != 5) return out;
  if (msg[1] != 1 || msg[2] != 6) {
    out.diagnostics.push_back(malformed("DHCPACK with non-Ethernet hardware address"));
    return out;
  }

  Observation obs;
  obs.source = "dhcp";
  obs.mac = mac_of(msg.subspan(28, 6));
  obs.ip = Ipv4Address(read_u32(msg, 16)).to_string();
  obs.prefix_len = prefix;
  obs.hostname = hostname;
  obs.dhcp = true;
  out.observation = std::move(obs);
  return out;
}

Extraction extract_icmp(Bytes frame) {
  Extraction out;
  auto ip = ipv4_of(frame);
  if (!ip || ip->protocol != kProtoIcmp || ip->payload.empty()) return out;
  const std::uint8_t type = ip->payload[0];
  if (type != 0 && type != 8) return out;
  Observation obs;
  obs.source = "icmp";
  obs.ip = ip->source.to_string();
  out.observation = std::move(obs);
  return out;
}

std::optional<SynFeatures> syn_features(const Ipv4Packet& ip, const TcpSegment& tcp) {
  SynFeatures f;
  f.initial_ttl = ttl_bucket(ip.ttl);
  f.window_size = tcp.window;
  f.df = ip.dont_fragment;
  const auto opts = tcp.options;
  std::size_t pos = 0;
  while (pos < opts.size()) {
    const std::uint8_t kind = opts[pos];
    if (kind == tcp_option::eol) {
      f.options_order.push_back(kind);
      break;
    }
    if (kind == tcp_option::nop) {
      f.options_order.push_back(kind);
      ++pos;
      continue;
    }
    if (pos + 1 >= opts.size()) return std::nullopt;
    const std::uint8_t len = opts[pos + 1];
    if (len < 2 || pos + len > opts.size()) return std::nullopt;
    if (kind == tcp_option::mss) {
      if (len != 4) return std::nullopt;
      f.mss = read_u16(opts, pos + 2);
    } else if (kind == tcp_option::window_scale) {
      if (len != 3) return std::nullopt;
      f.window_scale = opts[pos + 2];
    }
    f.options_order.push_back(kind);
    pos += len;
  }
  return f;
}

SynExtraction extract_syn(Bytes frame, const SignatureDb& db) {
  SynExtraction out;
  auto eth = decode_ethernet(frame);
  auto ip = ipv4_of(frame);
  if (!eth || !ip || ip->protocol != kProtoTcp) return out;
  auto tcp = decode_tcp(ip->payload);
  if (!tcp) return out;
  if ((tcp->flags & tcp_flags::syn) == 0 || (tcp->flags & tcp_flags::ack) != 0) return out;

  Observation obs;
  obs.source = "tcp-syn";
  obs.ip = ip->source.to_string();
  obs.mac = mac_of(eth->source);
  out.features = syn_features(*ip, *tcp);
  if (!out.features) {
    out.diagnostics.push_back(malformed("unparseable TCP options in SYN from " + *obs.ip));
  } else if (auto os = fingerprint_syn(*out.features, db)) {
    obs.os = std::move(*os);
  }
  out.observation = std::move(obs);
  return out;
}

}  // namespace netcarta::packet
