#include "netcarta/irtools/os_infer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace netcarta::irtools {

namespace {

constexpr std::array kRules{
    HostnameRule{HostnameMatch::prefix, "android-", "android"},
    HostnameRule{HostnameMatch::contains, "iphone", "ios"},
    HostnameRule{HostnameMatch::contains, "ipad", "ipados"},
    HostnameRule{HostnameMatch::contains, "macbook", "macos"},
    HostnameRule{HostnameMatch::contains, "imac", "macos"},
    HostnameRule{HostnameMatch::suffix, "-pc", "windows"},
    HostnameRule{HostnameMatch::contains, "windows", "windows"},
    HostnameRule{HostnameMatch::contains, "desktop-", "windows"},
};

bool hits(const HostnameRule& rule, std::string_view name) {
  switch (rule.match) {
    case HostnameMatch::prefix: return name.starts_with(rule.pattern);
    case HostnameMatch::suffix: return name.ends_with(rule.pattern);
    case HostnameMatch::contains: return name.find(rule.pattern) != std::string_view::npos;
  }
  return false;
}

}  // namespace

std::span<const HostnameRule> hostname_rules() { return kRules; }

std::optional<std::string> infer_os_from_hostname(std::string_view hostname) {
  std::string lowered(hostname);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& rule : kRules) {
    if (hits(rule, lowered)) return std::string(rule.os);
  }
  return std::nullopt;
}

std::size_t annotate_os_from_hostnames(Experiment& experiment) {
  std::vector<std::pair<Id, std::string>> updates;
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    if (!lookup(endpoint.data, keys::os).empty()) continue;
    if (auto os = infer_os_from_hostname(lookup(endpoint.data, keys::hostname))) {
      updates.emplace_back(nid, std::move(*os));
    }
  }
  for (auto& [nid, os] : updates) {
    experiment.mutable_data(nid)[std::string(keys::os)] = std::move(os);
  }
  return updates.size();
}

}  // namespace netcarta::irtools
