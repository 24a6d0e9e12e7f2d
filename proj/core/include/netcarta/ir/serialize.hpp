#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "netcarta/ir/experiment.hpp"

namespace netcarta {

// Canonical experiment document:
//   {"Nodes":[{"NID":1,"Edges":[{"N":63,"D":{...}}],"D":{...}}],
//    "Networks":[{"NID":63,"D":{...}}],"Config":{...}}
// Two-space indentation, metadata keys sorted, nodes in ascending NID,
// terminated by a newline. Equal experiments serialize to equal bytes.
std::string serialize(const Experiment& experiment);
nlohmann::ordered_json to_document(const Experiment& experiment);

// Throws ParseError (with byte offset) for malformed JSON or schema violations
// and IntegrityError listing dangling edge references.
Experiment deserialize(std::string_view text);
Experiment from_document(const nlohmann::json& document);

nlohmann::ordered_json endpoint_to_json(const Endpoint& endpoint);
nlohmann::ordered_json network_to_json(const NetworkNode& network);
nlohmann::ordered_json metadata_to_json(const MetadataMap& map);

// `{"Edges":[...],"D":{...}}` with an optional NID; missing NID yields Id{0}.
Endpoint endpoint_from_json(const nlohmann::json& j);
NetworkNode network_from_json(const nlohmann::json& j);
MetadataMap metadata_from_json(const nlohmann::json& j);

// Whole-file helpers. write_file goes through a temporary and a rename.
Experiment load_experiment(const std::filesystem::path& path);
void save_experiment(const Experiment& experiment, const std::filesystem::path& path);
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace netcarta
