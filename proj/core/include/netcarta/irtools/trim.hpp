#pragma once

#include <cstddef>
#include <string_view>

#include "netcarta/ir/experiment.hpp"

namespace netcarta::irtools {

// Sets d.marked="true" on every endpoint matching the query; returns the match
// count. A malformed query throws ParseError before anything changes.
std::size_t mark(Experiment& experiment, std::string_view query);

// Removes d.marked from every matching endpoint; returns how many carried it.
std::size_t unmark(Experiment& experiment, std::string_view query);

struct SweepResult {
  std::size_t endpoints = 0;
  std::size_t networks = 0;  // left without references by the sweep
};

// Deletes marked endpoints, then any network that lost its last reference.
SweepResult sweep(Experiment& experiment);

}  // namespace netcarta::irtools
