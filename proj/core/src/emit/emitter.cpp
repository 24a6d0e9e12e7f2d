#include "netcarta/emit/emitter.hpp"

#include "netcarta/error.hpp"

namespace netcarta::emit {

EmitResult emit(const Experiment& experiment, const TemplateSet& templates,
                const EmitOptions& options) {
  EmitResult out;
  Experiment working = experiment;
  out.diagnostics = dedup(working, options.dedup);

  const RenderContext global{nullptr, &working.networks(), &working.config()};
  auto render_special = [&](const std::optional<TemplateBody>& body, const char* file) {
    if (!body) return;
    try {
      out.script += body->render(global).text;
    } catch (const RenderError& e) {
      throw RenderError(std::string(file) + ": " + e.what());
    }
  };

  render_special(templates.header, "_header.template");
  auto first = templates.passes.begin();
  while (first != templates.passes.end()) {
    auto last = first;
    while (last != templates.passes.end() && last->pass == first->pass) ++last;
    for (const auto& [nid, endpoint] : working.endpoints()) {
      const RenderContext context{&endpoint, &working.networks(), &working.config()};
      for (auto t = first; t != last; ++t) {
        if (options.on_render) options.on_render(*t, nid);
        RenderResult result;
        try {
          result = t->body.render(context);
        } catch (const RenderError& e) {
          throw RenderError("node " + nid.to_string() + ", template " + t->file_name + ": " +
                            e.what());
        }
        out.script += result.text;
        if (result.handled) break;
      }
    }
    first = last;
  }
  render_special(templates.footer, "_footer.template");
  return out;
}

}  // namespace netcarta::emit
