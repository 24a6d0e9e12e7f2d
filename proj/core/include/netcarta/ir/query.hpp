#pragma once

#include <string>
#include <string_view>

#include "netcarta/ir/types.hpp"

namespace netcarta {

// `key=value` matches node metadata, `edge.key=value` matches any edge's
// metadata, and `network=<nid>` matches endpoints with an edge on that network.
struct Query {
  enum class Scope { node, edge, network };

  Scope scope = Scope::node;
  std::string key;
  std::string value;

  // Throws ParseError describing the expected grammar.
  static Query parse(std::string_view text);

  bool matches(const Endpoint& endpoint) const;
  std::string to_string() const;
};

}  // namespace netcarta
