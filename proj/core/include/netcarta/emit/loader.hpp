#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netcarta/emit/template.hpp"

namespace netcarta::emit {

struct Template {
  char pass = 'A';
  int order = 0;
  std::string name;       // e.g. "network" for S70network.template
  std::string file_name;  // e.g. "S70network.template"
  TemplateBody body;
};

struct TemplateSet {
  std::vector<Template> passes;  // sorted by (pass, order, name)
  std::optional<TemplateBody> header;
  std::optional<TemplateBody> footer;
};

struct TemplateName {
  char pass;
  int order;
  std::string name;
};

// `S70network.template` -> {S, 70, "network"}. Returns nullopt for names that
// break the rule, including the `_header`/`_footer` specials.
std::optional<TemplateName> parse_template_name(std::string_view file_name);

// Builds a set from (file name, body) pairs. Throws ConfigError for names that
// break the naming rule and ParseError for invalid bodies.
TemplateSet make_template_set(
    const std::vector<std::pair<std::string, std::string>>& files);

// Reads every `*.template` file in `dir` (other files are ignored).
// Throws ConfigError when the directory cannot be read.
TemplateSet load_templates(const std::filesystem::path& dir);

// The built-in container template set.
const TemplateSet& default_templates();
std::vector<std::pair<std::string, std::string>> default_template_files();

}  // namespace netcarta::emit
