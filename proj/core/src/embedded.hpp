#pragma once

#include <string_view>
#include <utility>
#include <vector>

// Data files compiled into the library at configure time.
namespace netcarta::detail {

std::string_view embedded_signatures();
// (file name, body) pairs from templates/default, sorted by file name.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_templates();

}  // namespace netcarta::detail
