#pragma once

#include <set>
#include <string>
#include <vector>

#include "netcarta/diagnostic.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::irtools {

struct RuleConfig {
  int max_interfaces = 16;
  std::set<std::string> enabled{"R1", "R2", "R3", "R4", "R5", "R6"};

  // Throws ConfigError for max_interfaces < 1 or unknown rule codes.
  void validate() const;
};

// Gap analysis. Read-only; output is sorted by rule code, then by the first
// subject nid.
//   R1 error    endpoint with more than max_interfaces edges
//   R2 error    two or more endpoints sharing an ip on one network
//   R3 warning  endpoint without edges
//   R4 warning  network that no edge references
//   R5 error    endpoint with edges, none carrying an ip, and no dhcp="true"
//   R6 warning  hostname used by more than one endpoint
std::vector<Diagnostic> check(const Experiment& experiment, const RuleConfig& rules = {});

}  // namespace netcarta::irtools
