#include "netcarta/emit/loader.hpp"

#include <algorithm>
#include <regex>

#include "embedded.hpp"
#include "netcarta/error.hpp"
#include "netcarta/ir/serialize.hpp"

namespace netcarta::emit {

namespace {
constexpr std::string_view kSuffix = ".template";
constexpr std::string_view kHeader = "_header.template";
constexpr std::string_view kFooter = "_footer.template";
}  // namespace

std::optional<TemplateName> parse_template_name(std::string_view file_name) {
  static const std::regex rule(R"(^([A-Z])([0-9]{2})([A-Za-z0-9_-]+)\.template$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(file_name.begin(), file_name.end(), m, rule)) return std::nullopt;
  return TemplateName{m[1].str()[0], std::stoi(m[2].str()), m[3].str()};
}

TemplateSet make_template_set(const std::vector<std::pair<std::string, std::string>>& files) {
  TemplateSet set;
  for (const auto& [file_name, text] : files) {
    if (file_name == kHeader) {
      set.header = TemplateBody::parse(text, file_name);
      continue;
    }
    if (file_name == kFooter) {
      set.footer = TemplateBody::parse(text, file_name);
      continue;
    }
    auto parsed = parse_template_name(file_name);
    if (!parsed) {
      throw ConfigError("template file '" + file_name +
                        "' must be named like S70network.template (pass letter A-Z, two-digit "
                        "order, name)");
    }
    set.passes.push_back(
        Template{parsed->pass, parsed->order, parsed->name, file_name, TemplateBody::parse(text, file_name)});
  }
  std::sort(set.passes.begin(), set.passes.end(), [](const Template& a, const Template& b) {
    return std::tie(a.pass, a.order, a.name) < std::tie(b.pass, b.order, b.name);
  });
  return set;
}

TemplateSet load_templates(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw ConfigError("cannot read template directory " + dir.string() + ": " + ec.message());
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : it) {
    const std::string file_name = entry.path().filename().string();
    if (!file_name.ends_with(kSuffix) || !entry.is_regular_file()) continue;
    files.emplace_back(file_name, read_file(entry.path()));
  }
  std::sort(files.begin(), files.end());
  return make_template_set(files);
}

std::vector<std::pair<std::string, std::string>> default_template_files() {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& [name, body] : detail::embedded_templates()) {
    files.emplace_back(std::string(name), std::string(body));
  }
  std::sort(files.begin(), files.end());
  return files;
}

const TemplateSet& default_templates() {
  static const TemplateSet set = make_template_set(default_template_files());
  return set;
}

}  // namespace netcarta::emit
