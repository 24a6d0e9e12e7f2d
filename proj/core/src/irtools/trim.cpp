#include "netcarta/irtools/trim.hpp"

#include <set>

namespace netcarta::irtools {

namespace {
constexpr std::string_view kTrue = "true";
}

std::size_t mark(Experiment& experiment, std::string_view query) {
  const auto ids = experiment.find_nodes(Query::parse(query));
  for (Id nid : ids) experiment.mutable_data(nid).insert_or_assign(std::string(keys::marked), std::string(kTrue));
  return ids.size();
}

std::size_t unmark(Experiment& experiment, std::string_view query) {
  std::size_t count = 0;
  for (Id nid : experiment.find_nodes(Query::parse(query))) {
    auto& data = experiment.mutable_data(nid);
    if (auto it = data.find(keys::marked); it != data.end()) {
      data.erase(it);
      ++count;
    }
  }
  return count;
}

SweepResult sweep(Experiment& experiment) {
  std::vector<Id> doomed;
  std::set<Id> touched;
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    if (lookup(endpoint.data, keys::marked) != kTrue) continue;
    doomed.push_back(nid);
    for (const auto& edge : endpoint.edges) touched.insert(edge.network);
  }
  SweepResult result;
  for (Id nid : doomed) experiment.remove_endpoint(nid);
  result.endpoints = doomed.size();
  std::set<Id> referenced;
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    for (const auto& edge : endpoint.edges) referenced.insert(edge.network);
  }
  for (Id network : touched) {
    if (experiment.find_network(network) && !referenced.contains(network)) {
      experiment.remove_network(network);
      ++result.networks;
    }
  }
  return result;
}

}  // namespace netcarta::irtools
