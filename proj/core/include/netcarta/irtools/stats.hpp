#pragma once

#include <cstddef>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "netcarta/ir/experiment.hpp"

namespace netcarta::irtools {

struct Stats {
  std::size_t endpoints = 0;
  std::size_t networks = 0;
  std::size_t marked = 0;
  std::map<Id, std::size_t> endpoints_per_network;  // every network, zero included
  std::map<std::string, std::size_t> os_histogram;  // "unknown" for endpoints without os

  bool operator==(const Stats&) const = default;
};

// With `infer_os`, endpoints lacking `os` are counted under the label their
// hostname suggests. The experiment is not modified.
Stats stats(const Experiment& experiment, bool infer_os = false);

nlohmann::json to_json(const Stats& stats);

}  // namespace netcarta::irtools
