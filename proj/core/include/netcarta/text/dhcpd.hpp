#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "netcarta/ir/observation.hpp"

namespace netcarta::text {

struct DhcpdParseResult {
  std::vector<Observation> observations;
  std::size_t skipped_lines = 0;
};

// Scans dhcpd log text for
//   DHCPACK on <ip> to <mac> [(<hostname>)] via <gateway>
// anywhere in a line (syslog prefixes are fine). Each match yields an
// observation with dhcp=true and a network hint of the gateway's
// /hint_prefix; when the relay is an interface name rather than an address,
// the leased address stands in for it. Other lines are counted and skipped.
DhcpdParseResult parse_dhcpd_log(std::string_view text, int hint_prefix = 24);

}  // namespace netcarta::text
