#pragma once

#include <functional>
#include <string>
#include <vector>

#include "netcarta/diagnostic.hpp"
#include "netcarta/emit/dedup.hpp"
#include "netcarta/emit/loader.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::emit {

struct EmitOptions {
  DedupMode dedup = DedupMode::drop;
  // Called before each (template, node) render; used for tracing.
  std::function<void(const Template&, Id)> on_render;
};

struct EmitResult {
  std::string script;
  std::vector<Diagnostic> diagnostics;
};

// Dedups a private copy, renders the header, then for each pass letter A-Z
// walks endpoints in ascending nid and applies that pass's templates in order
// until one reports handled, then renders the footer. The experiment passed in
// is never modified. A render failure throws RenderError naming node and
// template.
EmitResult emit(const Experiment& experiment, const TemplateSet& templates,
                const EmitOptions& options = {});

}  // namespace netcarta::emit
