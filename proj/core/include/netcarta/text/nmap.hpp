#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "netcarta/ir/observation.hpp"

namespace netcarta::text {

// One observation per <host> whose <status state="up">: ipv4 and mac
// addresses, the first <hostname>, the highest-accuracy <osmatch> folded to a
// family token, and every <port> whose <state state="open">. Observations carry
// no network hint; placement relies on networks already present in the IR.
// Throws ParseError with the line number for malformed XML.
std::vector<Observation> parse_nmap_xml(std::string_view xml);

// "Linux 4.15 - 5.6" -> "linux"; families are linux, windows, macos, other.
std::string os_family(std::string_view os_name);

}  // namespace netcarta::text
