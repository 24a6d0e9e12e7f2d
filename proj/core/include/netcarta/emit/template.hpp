#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netcarta/ir/types.hpp"

namespace netcarta::emit {

namespace ast {
struct Block;
}

// Read-only view handed to a template. `node` is null for header/footer
// renders, where only `$c` is available.
struct RenderContext {
  const Endpoint* node = nullptr;
  const std::map<Id, NetworkNode>* networks = nullptr;
  const MetadataMap* config = nullptr;
};

struct RenderResult {
  std::string text;  // newline-terminated lines, blank lines removed
  bool handled = false;
};

// A compiled template body.
//
// Syntax, inside `{{ ... }}`:
//   expr                       interpolation; missing keys render empty
//   if expr / else / end       conditional; truthy means nonempty
//   range $e / end             repeat per edge of the node, in order
//   handled                    stop this pass for the current node
// Expressions are operands or calls: `eq a b`, `ne a b`, `not a`, `and a b`,
// `or a b`, with parentheses for nesting. Operands are string literals or
// accessors: $n.NID, $n.D.key, $e.N, $e.Index, $e.D.key, $e.Net.NID,
// $e.Net.D.key, $c.key.
class TemplateBody {
 public:
  // Throws ParseError "<source>:<line>: message".
  static TemplateBody parse(std::string_view text, std::string_view source = "<template>");

  // Throws RenderError for unknown accessor roots or `$e` outside a range.
  RenderResult render(const RenderContext& context) const;

 private:
  std::shared_ptr<const ast::Block> root_;
};

// Drops lines containing only whitespace; every kept line ends with '\n'.
std::string drop_blank_lines(std::string_view text);

}  // namespace netcarta::emit
