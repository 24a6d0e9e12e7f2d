#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netcarta/ir/id.hpp"

namespace netcarta {

enum class Severity { error, warning, info };

std::string_view to_string(Severity severity);

// Codes: R1..R6 gap-analysis rules, P* parser/reconcile findings, D* dedup.
struct Diagnostic {
  Severity severity = Severity::info;
  std::string code;
  std::string message;
  std::vector<Id> subjects;

  bool operator==(const Diagnostic&) const = default;
};

// "ERROR R1 12,14 message"; "-" stands in for an empty subject list.
std::string format_line(const Diagnostic& diagnostic);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

void to_json(nlohmann::json& j, const Diagnostic& d);
void from_json(const nlohmann::json& j, Diagnostic& d);

}  // namespace netcarta
