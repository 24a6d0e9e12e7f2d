#include "netcarta/diagnostic.hpp"

#include <algorithm>

#include "netcarta/error.hpp"

namespace netcarta {

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
  }
  return "info";
}

namespace {

Severity severity_from_string(std::string_view text) {
  if (text == "error") return Severity::error;
  if (text == "warning") return Severity::warning;
  if (text == "info") return Severity::info;
  throw ParseError("unknown severity '" + std::string(text) + "'");
}

}  // namespace

std::string format_line(const Diagnostic& d) {
  std::string line(to_string(d.severity));
  std::transform(line.begin(), line.end(), line.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  line += ' ';
  line += d.code;
  line += ' ';
  if (d.subjects.empty()) {
    line += '-';
  } else {
    for (std::size_t i = 0; i < d.subjects.size(); ++i) {
      if (i > 0) line += ',';
      line += d.subjects[i].to_string();
    }
  }
  line += ' ';
  line += d.message;
  return line;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

void to_json(nlohmann::json& j, const Diagnostic& d) {
  auto subjects = nlohmann::json::array();
  for (auto id : d.subjects) subjects.push_back(id.value);
  j = nlohmann::json{{"severity", to_string(d.severity)},
                     {"code", d.code},
                     {"message", d.message},
                     {"subjects", std::move(subjects)}};
}

void from_json(const nlohmann::json& j, Diagnostic& d) {
  d.severity = severity_from_string(j.at("severity").get<std::string>());
  d.code = j.at("code").get<std::string>();
  d.message = j.value("message", "");
  d.subjects.clear();
  if (auto it = j.find("subjects"); it != j.end()) {
    for (const auto& s : *it) d.subjects.push_back(Id{s.get<std::uint64_t>()});
  }
}

}  // namespace netcarta
