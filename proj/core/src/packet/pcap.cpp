#include "netcarta/packet/pcap.hpp"

#include "netcarta/error.hpp"
#include "netcarta/packet/extractors.hpp"

namespace netcarta::packet {

namespace {

std::uint32_t read_u32_le(Bytes b, std::size_t offset) {
  return std::uint32_t{b[offset]} | (std::uint32_t{b[offset + 1]} << 8) |
         (std::uint32_t{b[offset + 2]} << 16) | (std::uint32_t{b[offset + 3]} << 24);
}

constexpr std::size_t kGlobalHeader = 24;
constexpr std::size_t kRecordHeader = 16;
constexpr std::uint32_t kMaxSnap = 256 * 1024;

}  // namespace

PcapFile read_pcap(Bytes capture) {
  if (capture.size() < kGlobalHeader) throw ParseError("pcap: file shorter than the global header");
  bool little = false;
  PcapFile out;
  const std::uint32_t magic_be = read_u32(capture, 0);
  const std::uint32_t magic_le = read_u32_le(capture, 0);
  if (magic_be == 0xa1b2c3d4 || magic_be == 0xa1b23c4d) {
    out.nanosecond = magic_be == 0xa1b23c4d;
  } else if (magic_le == 0xa1b2c3d4 || magic_le == 0xa1b23c4d) {
    little = true;
    out.nanosecond = magic_le == 0xa1b23c4d;
  } else {
    throw ParseError("pcap: unrecognised magic number");
  }
  auto u32 = [&](std::size_t offset) {
    return little ? read_u32_le(capture, offset) : read_u32(capture, offset);
  };
  out.link_type = u32(20);
  if (out.link_type != kLinkTypeEthernet) {
    throw ParseError("pcap: unsupported link type " + std::to_string(out.link_type));
  }

  std::size_t pos = kGlobalHeader;
  while (pos < capture.size()) {
    if (capture.size() - pos < kRecordHeader) {
      out.diagnostics.push_back({Severity::warning, "P1",
                                 "pcap: truncated record header at byte " + std::to_string(pos),
                                 {}});
      break;
    }
    PcapRecord rec;
    rec.ts_sec = u32(pos);
    rec.ts_frac = u32(pos + 4);
    const std::uint32_t included = u32(pos + 8);
    rec.original_length = u32(pos + 12);
    pos += kRecordHeader;
    if (included > kMaxSnap || included > capture.size() - pos) {
      out.diagnostics.push_back({Severity::warning, "P1",
                                 "pcap: truncated record data at byte " + std::to_string(pos),
                                 {}});
      break;
    }
    rec.data = capture.subspan(pos, included);
    pos += included;
    out.records.push_back(rec);
  }
  return out;
}

ExtractedObservations extract_all(const PcapFile& capture, const SignatureDb& db) {
  ExtractedObservations out;
  auto take = [&](auto&& result) {
    if (result.observation) out.observations.push_back(std::move(*result.observation));
    for (auto& d : result.diagnostics) out.diagnostics.push_back(std::move(d));
  };
  for (const auto& rec : capture.records) {
    auto eth = decode_ethernet(rec.data);
    if (!eth) {
      out.diagnostics.push_back({Severity::warning, "P1", "frame shorter than an Ethernet header", {}});
      continue;
    }
    if (eth->ethertype == kEtherTypeIpv6) {
      ++out.ipv6_frames;
      continue;
    }
    take(extract_arp(rec.data));
    take(extract_dhcp(rec.data));
    take(extract_mdns(rec.data));
    take(extract_icmp(rec.data));
    take(extract_syn(rec.data, db));
  }
  if (out.ipv6_frames > 0) {
    out.diagnostics.push_back({Severity::info, "P2",
                               "skipped " + std::to_string(out.ipv6_frames) + " IPv6 frame(s)",
                               {}});
  }
  return out;
}

PcapResult parse_pcap(Bytes capture, const PcapOptions& options) {
  const SignatureDb& db = options.signatures ? *options.signatures : default_signatures();
  PcapFile file = read_pcap(capture);
  ExtractedObservations extracted = extract_all(file, db);
  ReconcileResult reconciled = reconcile(extracted.observations, options.conflicts);
  PcapResult out;
  out.observations = std::move(reconciled.observations);
  out.diagnostics = std::move(file.diagnostics);
  for (auto& d : extracted.diagnostics) out.diagnostics.push_back(std::move(d));
  for (auto& d : reconciled.diagnostics) out.diagnostics.push_back(std::move(d));
  return out;
}

}  // namespace netcarta::packet
