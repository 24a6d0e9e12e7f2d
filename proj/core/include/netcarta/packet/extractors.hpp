#pragma once

#include <optional>
#include <vector>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/observation.hpp"
#include "netcarta/packet/decode.hpp"
#include "netcarta/packet/fingerprint.hpp"

namespace netcarta::packet {

// Per-packet extractors. Each takes a raw Ethernet frame, depends on nothing
// but its bytes, and stays silent for traffic outside its protocol.
struct Extraction {
  std::optional<Observation> observation;
  std::vector<Diagnostic> diagnostics;
};

// ARP replies: sender hardware/protocol address. Requests yield nothing.
Extraction extract_arp(Bytes frame);

// mDNS responses (UDP 5353): PTR service types and SRV instance names into
// `services`; an A record supplies hostname and ip, else the source ip is used.
Extraction extract_mdns(Bytes frame);

// DHCPACK: chaddr, yiaddr, hostname (option 12), prefix (option 1), dhcp=true.
Extraction extract_dhcp(Bytes frame);

// ICMP echo request/reply: the IPv4 source.
Extraction extract_icmp(Bytes frame);

struct SynExtraction {
  std::optional<Observation> observation;
  std::optional<SynFeatures> features;
  std::vector<Diagnostic> diagnostics;
};

// TCP SYN without ACK: source ip/mac annotated with the fingerprinted os.
SynExtraction extract_syn(Bytes frame, const SignatureDb& db);

// Reads SynFeatures from an IPv4 TTL/DF pair and TCP header fields. Returns
// nullopt when the option list is malformed.
std::optional<SynFeatures> syn_features(const Ipv4Packet& ip, const TcpSegment& tcp);

}  // namespace netcarta::packet
