#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::text {

// ios covers Cisco/Arista style blocks; junos_set covers Juniper `set` lines.
// Other vendors plug in as further dialects.
enum class RouterDialect { ios, junos_set };

// Throws ConfigError for unsupported dialect names.
RouterDialect parse_dialect(std::string_view name);
std::string_view to_string(RouterDialect dialect);

struct RouterInterface {
  std::string name;
  std::string ip;  // dotted quad
  int prefix_len = 32;

  bool operator==(const RouterInterface&) const = default;
};

struct RouterSpec {
  std::string name;
  std::vector<RouterInterface> interfaces;

  bool operator==(const RouterSpec&) const = default;
};

struct RouterParseResult {
  RouterSpec spec;
  std::vector<Diagnostic> diagnostics;
};

// Layer-3 view only: hostname plus addressed, enabled interfaces. Interfaces
// without an address (or shut down) are skipped with a diagnostic.
RouterParseResult parse_router_config(std::string_view text, RouterDialect dialect);

struct LinkResult {
  std::vector<Id> routers;
  std::vector<Diagnostic> diagnostics;
};

// One router endpoint per spec ({hostname, role=router}), one edge per
// interface attached through network_for_subnet, so interfaces on the same
// canonical subnet share a network. Reports stub subnets (one router
// interface) and routers without interfaces as info diagnostics. Throws
// ValidationError on duplicate router hostnames, leaving the experiment as it was.
LinkResult link_routers(std::span<const RouterSpec> specs, Experiment& experiment);

void to_json(nlohmann::json& j, const RouterSpec& spec);
void from_json(const nlohmann::json& j, RouterSpec& spec);

}  // namespace netcarta::text
