#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace netcarta {

// Identifier shared by endpoints and networks; one counter per experiment.
struct Id {
  std::uint64_t value = 0;

  auto operator<=>(const Id&) const = default;
  std::string to_string() const { return std::to_string(value); }
};

}  // namespace netcarta

template <>
struct std::hash<netcarta::Id> {
  std::size_t operator()(netcarta::Id id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
