#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "netcarta/ir/experiment.hpp"

namespace netcarta::irtools {

enum class HostnameMatch { prefix, suffix, contains };

struct HostnameRule {
  HostnameMatch match;
  std::string_view pattern;  // lowercase
  std::string_view os;
};

// Checked in order, case-insensitively; the first hit decides.
std::span<const HostnameRule> hostname_rules();

std::optional<std::string> infer_os_from_hostname(std::string_view hostname);

// Fills `os` on endpoints that lack it and whose hostname matches a rule.
// Returns how many endpoints were annotated.
std::size_t annotate_os_from_hostnames(Experiment& experiment);

}  // namespace netcarta::irtools
