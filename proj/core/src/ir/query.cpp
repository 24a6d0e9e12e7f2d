#include "netcarta/ir/query.hpp"

#include <charconv>

#include "netcarta/error.hpp"

namespace netcarta {

namespace {

constexpr const char* kGrammar = "expected key=value, edge.key=value or network=<nid>";

}  // namespace

Query Query::parse(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParseError("malformed query '" + std::string(text) + "': " + kGrammar);
  }
  Query query;
  auto key = text.substr(0, eq);
  query.value = std::string(text.substr(eq + 1));
  if (key.starts_with("edge.")) {
    key.remove_prefix(5);
    if (key.empty()) {
      throw ParseError("malformed query '" + std::string(text) + "': " + kGrammar);
    }
    query.scope = Scope::edge;
  } else if (key == "network") {
    std::uint64_t nid = 0;
    const auto& v = query.value;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), nid);
    if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) {
      throw ParseError("malformed query '" + std::string(text) +
                       "': network=<nid> needs a numeric id");
    }
    query.value = std::to_string(nid);
    query.scope = Scope::network;
  }
  query.key = std::string(key);
  return query;
}

bool Query::matches(const Endpoint& endpoint) const {
  switch (scope) {
    case Scope::node: {
      auto it = endpoint.data.find(key);
      return it != endpoint.data.end() && it->second == value;
    }
    case Scope::edge:
      for (const auto& edge : endpoint.edges) {
        auto it = edge.data.find(key);
        if (it != edge.data.end() && it->second == value) return true;
      }
      return false;
    case Scope::network:
      for (const auto& edge : endpoint.edges) {
        if (edge.network.to_string() == value) return true;
      }
      return false;
  }
  return false;
}

std::string Query::to_string() const {
  return (scope == Scope::edge ? "edge." : "") + key + "=" + value;
}

}  // namespace netcarta
