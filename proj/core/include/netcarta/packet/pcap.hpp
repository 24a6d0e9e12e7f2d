#pragma once

#include <cstdint>
#include <vector>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/observation.hpp"
#include "netcarta/packet/decode.hpp"
#include "netcarta/packet/fingerprint.hpp"
#include "netcarta/packet/reconcile.hpp"

namespace netcarta::packet {

inline constexpr std::uint32_t kLinkTypeEthernet = 1;

struct PcapRecord {
  std::uint32_t ts_sec = 0;
  std::uint32_t ts_frac = 0;
  std::uint32_t original_length = 0;
  Bytes data;  // views into the capture buffer
};

struct PcapFile {
  bool nanosecond = false;
  std::uint32_t link_type = 0;
  std::vector<PcapRecord> records;
  std::vector<Diagnostic> diagnostics;  // P1 for a truncated tail
};

// Classic libpcap format in either byte order. Throws ParseError when the
// global header is unusable or the link type is not Ethernet. A truncated
// record stops reading with a P1 diagnostic; earlier records are kept.
PcapFile read_pcap(Bytes capture);

struct ExtractedObservations {
  std::vector<Observation> observations;
  std::vector<Diagnostic> diagnostics;
  std::size_t ipv6_frames = 0;
};

// Runs every extractor over every record, in capture order.
ExtractedObservations extract_all(const PcapFile& capture, const SignatureDb& db);

struct PcapOptions {
  ConflictMode conflicts = ConflictMode::drop;
  const SignatureDb* signatures = nullptr;  // defaults to the shipped database
};

struct PcapResult {
  std::vector<Observation> observations;
  std::vector<Diagnostic> diagnostics;
};

// read_pcap + extract_all + reconcile.
PcapResult parse_pcap(Bytes capture, const PcapOptions& options = {});

}  // namespace netcarta::packet
