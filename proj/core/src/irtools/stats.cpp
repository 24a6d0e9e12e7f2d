#include "netcarta/irtools/stats.hpp"

#include <set>

#include "netcarta/irtools/os_infer.hpp"

namespace netcarta::irtools {

Stats stats(const Experiment& experiment, bool infer_os) {
  Stats out;
  out.endpoints = experiment.endpoints().size();
  out.networks = experiment.networks().size();
  for (const auto& [nid, network] : experiment.networks()) out.endpoints_per_network[nid] = 0;
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    if (lookup(endpoint.data, keys::marked) == "true") ++out.marked;
    std::set<Id> attached;
    for (const auto& edge : endpoint.edges) attached.insert(edge.network);
    for (Id network : attached) ++out.endpoints_per_network[network];

    std::string os(lookup(endpoint.data, keys::os));
    if (os.empty() && infer_os) {
      os = infer_os_from_hostname(lookup(endpoint.data, keys::hostname)).value_or("");
    }
    ++out.os_histogram[os.empty() ? "unknown" : os];
  }
  return out;
}

nlohmann::json to_json(const Stats& stats) {
  nlohmann::json per_network = nlohmann::json::object();
  for (const auto& [nid, count] : stats.endpoints_per_network) per_network[nid.to_string()] = count;
  nlohmann::json os = nlohmann::json::object();
  for (const auto& [label, count] : stats.os_histogram) os[label] = count;
  return {{"endpoints", stats.endpoints},
          {"networks", stats.networks},
          {"marked", stats.marked},
          {"endpoints_per_network", per_network},
          {"os", os}};
}

}  // namespace netcarta::irtools
