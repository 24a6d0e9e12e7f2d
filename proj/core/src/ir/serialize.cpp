#include "netcarta/ir/serialize.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "netcarta/error.hpp"

namespace netcarta {

nlohmann::ordered_json metadata_to_json(const MetadataMap& map) {
  auto j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : map) j[key] = value;
  return j;
}

nlohmann::ordered_json endpoint_to_json(const Endpoint& endpoint) {
  nlohmann::ordered_json j;
  j["NID"] = endpoint.nid.value;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& edge : endpoint.edges) {
    nlohmann::ordered_json e;
    e["N"] = edge.network.value;
    e["D"] = metadata_to_json(edge.data);
    edges.push_back(std::move(e));
  }
  j["Edges"] = std::move(edges);
  j["D"] = metadata_to_json(endpoint.data);
  return j;
}

nlohmann::ordered_json network_to_json(const NetworkNode& network) {
  nlohmann::ordered_json j;
  j["NID"] = network.nid.value;
  j["D"] = metadata_to_json(network.data);
  return j;
}

nlohmann::ordered_json to_document(const Experiment& experiment) {
  nlohmann::ordered_json doc;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& [nid, endpoint] : experiment.endpoints()) {
    nodes.push_back(endpoint_to_json(endpoint));
  }
  auto networks = nlohmann::ordered_json::array();
  for (const auto& [nid, network] : experiment.networks()) {
    networks.push_back(network_to_json(network));
  }
  doc["Nodes"] = std::move(nodes);
  doc["Networks"] = std::move(networks);
  doc["Config"] = metadata_to_json(experiment.config());
  return doc;
}

std::string serialize(const Experiment& experiment) {
  return to_document(experiment).dump(2, ' ', false,
                                      nlohmann::json::error_handler_t::replace) +
         "\n";
}

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

Id id_field(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing \"") + key + "\"");
  if (!it->is_number_unsigned() || it->get<std::uint64_t>() == 0) {
    schema_error(where, std::string("\"") + key + "\" must be a positive integer");
  }
  return Id{it->get<std::uint64_t>()};
}

}  // namespace

MetadataMap metadata_from_json(const nlohmann::json& j) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw ParseError("metadata must be a JSON object of strings");
  MetadataMap map;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key().empty()) throw ParseError("metadata keys must be nonempty");
    if (!it.value().is_string()) {
      throw ParseError("metadata value for \"" + it.key() + "\" must be a string");
    }
    map.emplace(it.key(), it.value().get<std::string>());
  }
  return map;
}

Endpoint endpoint_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("node must be a JSON object");
  Endpoint endpoint;
  const std::string where = j.contains("NID") ? "node " + j["NID"].dump() : "node";
  if (j.contains("NID")) endpoint.nid = id_field(j, "NID", where);
  if (auto it = j.find("Edges"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) schema_error(where, "\"Edges\" must be an array");
    for (const auto& e : *it) {
      if (!e.is_object()) schema_error(where, "edge must be an object");
      Edge edge;
      edge.network = id_field(e, "N", where + " edge");
      edge.data = metadata_from_json(e.value("D", nlohmann::json::object()));
      endpoint.edges.push_back(std::move(edge));
    }
  }
  endpoint.data = metadata_from_json(j.value("D", nlohmann::json::object()));
  return endpoint;
}

NetworkNode network_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("network must be a JSON object");
  NetworkNode network;
  const std::string where = j.contains("NID") ? "network " + j["NID"].dump() : "network";
  if (j.contains("NID")) network.nid = id_field(j, "NID", where);
  network.data = metadata_from_json(j.value("D", nlohmann::json::object()));
  return network;
}

Experiment from_document(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("experiment document must be a JSON object");
  for (const char* key : {"Nodes", "Networks"}) {
    if (auto it = doc.find(key); it != doc.end() && !it->is_array()) {
      throw ParseError(std::string("\"") + key + "\" must be an array");
    }
  }
  Experiment experiment;
  if (auto it = doc.find("Networks"); it != doc.end()) {
    for (const auto& n : *it) {
      auto network = network_from_json(n);
      if (network.nid.value == 0) throw ParseError("network missing \"NID\"");
      experiment.insert_network(std::move(network));
    }
  }
  std::string dangling;
  if (auto it = doc.find("Nodes"); it != doc.end()) {
    for (const auto& n : *it) {
      auto endpoint = endpoint_from_json(n);
      if (endpoint.nid.value == 0) throw ParseError("node missing \"NID\"");
      for (const auto& edge : endpoint.edges) {
        if (!experiment.find_network(edge.network)) {
          if (!dangling.empty()) dangling += ", ";
          dangling += endpoint.nid.to_string() + "->" + edge.network.to_string();
        }
        auto mac = lookup(edge.data, keys::mac);
        if (!mac.empty() && !is_canonical_mac(mac)) {
          throw ValidationError("node " + endpoint.nid.to_string() + ": malformed mac '" +
                                std::string(mac) + "'");
        }
        auto ip = lookup(edge.data, keys::ip);
        if (ip.find('/') != std::string_view::npos && !Cidr::try_parse(ip)) {
          throw ValidationError("node " + endpoint.nid.to_string() + ": malformed ip '" +
                                std::string(ip) + "'");
        }
      }
      experiment.insert_endpoint(std::move(endpoint));
    }
  }
  if (!dangling.empty()) throw IntegrityError("dangling edge references: " + dangling);
  if (auto it = doc.find("Config"); it != doc.end()) {
    experiment.config() = metadata_from_json(*it);
  }
  return experiment;
}

Experiment deserialize(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed experiment document at byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
  return from_document(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("error reading " + path.string());
  return buffer.str();
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
  auto temp = path;
  static std::atomic<unsigned> sequence{0};
  temp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(sequence++);
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + temp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("error writing " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw Error("cannot rename into " + path.string());
  }
}

Experiment load_experiment(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

void save_experiment(const Experiment& experiment, const std::filesystem::path& path) {
  write_file_atomically(path, serialize(experiment));
}

}  // namespace netcarta
