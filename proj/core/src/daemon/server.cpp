#include "netcarta/daemon/server.hpp"

#include <charconv>

#include <httplib.h>

#include "netcarta/daemon/snapshot.hpp"
#include "netcarta/error.hpp"
#include "netcarta/ir/serialize.hpp"

namespace netcarta::daemon {

BindAddress BindAddress::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("bind address '" + std::string(text) + "' must be host:port");
  }
  BindAddress address;
  if (colon > 0) address.host = std::string(text.substr(0, colon));
  const auto port_text = text.substr(colon + 1);
  int port = -1;
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || ec != std::errc{} || p != port_text.data() + port_text.size() ||
      port < 0 || port > 65535) {
    throw ConfigError("bind address '" + std::string(text) + "' has an invalid port");
  }
  address.port = port;
  return address;
}

std::string BindAddress::to_string() const { return host + ":" + std::to_string(port); }

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kGenerationHeader = "X-Netcarta-Generation";

int http_status(ApplyStatus status) {
  switch (status) {
    case ApplyStatus::ok: return 200;
    case ApplyStatus::created: return 201;
    case ApplyStatus::invalid: return 400;
    case ApplyStatus::not_found: return 404;
    case ApplyStatus::conflict: return 409;
  }
  return 500;
}

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n",
                  kJson);
}

void send_ordered(httplib::Response& res, int status, const nlohmann::ordered_json& body,
                  std::uint64_t generation) {
  res.status = status;
  res.set_header(kGenerationHeader, std::to_string(generation));
  res.set_content(body.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n",
                  kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::vector<Diagnostic>& diagnostics = {}) {
  nlohmann::json body{{"error", message}};
  if (!diagnostics.empty()) body["diagnostics"] = diagnostics;
  send_json(res, status, body);
}

void send_result(httplib::Response& res, const ApplyResult& result) {
  if (!result.accepted()) {
    send_error(res, http_status(result.status), result.message, result.diagnostics);
    return;
  }
  nlohmann::json ids = nlohmann::json::array();
  for (auto id : result.affected) ids.push_back(id.value);
  nlohmann::json body{{"status", "ok"}, {"ids", ids}, {"generation", result.generation}};
  if (result.affected.size() == 1) body["id"] = result.affected.front().value;
  if (!result.diagnostics.empty()) body["diagnostics"] = result.diagnostics;
  res.set_header(kGenerationHeader, std::to_string(result.generation));
  send_json(res, http_status(result.status), body);
}

std::optional<nlohmann::json> parse_body(const httplib::Request& req, httplib::Response& res) {
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    send_error(res, 400, std::string("malformed JSON body: ") + e.what());
    return std::nullopt;
  }
}

std::uint64_t path_id(const httplib::Request& req) {
  return std::stoull(req.matches[1].str());
}

std::optional<std::uint64_t> query_u64(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const auto text = req.get_param_value(name);
  std::uint64_t value = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
    throw ParseError(std::string("query parameter '") + name + "' must be an integer");
  }
  return value;
}

}  // namespace

struct Server::Impl {
  ExperimentStore& store;
  ServerOptions options;
  httplib::Server http;

  Impl(ExperimentStore& s, ServerOptions o) : store(s), options(o) { routes(); }

  void mutate(httplib::Response& res, MutationKind kind, nlohmann::json payload,
              std::optional<std::uint64_t> expected = std::nullopt) {
    send_result(res, store.apply(Mutation{kind, std::move(payload), expected}));
  }

  void routes() {
    http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                  std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const NotFoundError& e) {
        send_error(res, 404, e.what());
      } catch (const IntegrityError& e) {
        send_error(res, 409, e.what());
      } catch (const ParseError& e) {
        send_error(res, 400, e.what());
      } catch (const ValidationError& e) {
        send_error(res, 400, e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    });

    http.Get("/experiment", [this](const httplib::Request&, httplib::Response& res) {
      auto snap = store.snapshot();
      send_ordered(res, 200, to_document(*snap.experiment), snap.generation);
    });
    http.Put("/experiment", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      mutate(res, MutationKind::replace_experiment, std::move(*body),
             query_u64(req, "generation"));
    });

    http.Get("/nodes", [this](const httplib::Request& req, httplib::Response& res) {
      auto snap = store.snapshot();
      auto nodes = nlohmann::ordered_json::array();
      if (req.has_param("q")) {
        const auto query = Query::parse(req.get_param_value("q"));
        for (auto nid : snap.experiment->find_nodes(query)) {
          nodes.push_back(endpoint_to_json(*snap.experiment->find_endpoint(nid)));
        }
      } else {
        for (const auto& [nid, endpoint] : snap.experiment->endpoints()) {
          nodes.push_back(endpoint_to_json(endpoint));
        }
      }
      send_ordered(res, 200, nodes, snap.generation);
    });
    http.Get(R"(/nodes/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto snap = store.snapshot();
      const auto* endpoint = snap.experiment->find_endpoint(Id{path_id(req)});
      if (!endpoint) return send_error(res, 404, "no endpoint with id " + req.matches[1].str());
      send_ordered(res, 200, endpoint_to_json(*endpoint), snap.generation);
    });
    http.Post("/nodes", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      if (body->is_object()) body->erase("NID");
      mutate(res, MutationKind::put_endpoint, std::move(*body));
    });
    http.Put(R"(/nodes/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      if (!body->is_object()) return send_error(res, 400, "node body must be an object");
      (*body)["NID"] = path_id(req);
      mutate(res, MutationKind::put_endpoint, std::move(*body));
    });
    http.Delete(R"(/nodes/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      mutate(res, MutationKind::delete_node, nlohmann::json{{"NID", path_id(req)}});
    });

    http.Get("/networks", [this](const httplib::Request&, httplib::Response& res) {
      auto snap = store.snapshot();
      auto networks = nlohmann::ordered_json::array();
      for (const auto& [nid, network] : snap.experiment->networks()) {
        networks.push_back(network_to_json(network));
      }
      send_ordered(res, 200, networks, snap.generation);
    });
    http.Get(R"(/networks/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto snap = store.snapshot();
      const auto* network = snap.experiment->find_network(Id{path_id(req)});
      if (!network) return send_error(res, 404, "no network with id " + req.matches[1].str());
      send_ordered(res, 200, network_to_json(*network), snap.generation);
    });
    http.Post("/networks", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      if (body->is_object()) body->erase("NID");
      mutate(res, MutationKind::create_network, std::move(*body));
    });
    http.Delete(R"(/networks/(\d+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  auto snap = store.snapshot();
                  if (!snap.experiment->find_network(Id{path_id(req)})) {
                    return send_error(res, 404, "no network with id " + req.matches[1].str());
                  }
                  mutate(res, MutationKind::delete_node, nlohmann::json{{"NID", path_id(req)}});
                });

    http.Get("/config", [this](const httplib::Request&, httplib::Response& res) {
      auto snap = store.snapshot();
      send_ordered(res, 200, metadata_to_json(snap.experiment->config()), snap.generation);
    });
    http.Put("/config", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      mutate(res, MutationKind::set_config, std::move(*body));
    });

    http.Post("/observations", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      std::vector<Mutation> batch;
      if (body->is_array()) {
        for (auto& item : *body) batch.push_back({MutationKind::upsert_endpoint, std::move(item), {}});
      } else {
        batch.push_back({MutationKind::upsert_endpoint, std::move(*body), {}});
      }
      send_result(res, store.apply(batch));
    });
    http.Post("/routers", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      mutate(res, MutationKind::link_routers, std::move(*body));
    });
    http.Post("/traceroutes", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      if (body->is_object() && body->contains("hops")) *body = (*body)["hops"];
      mutate(res, MutationKind::ingest_traceroute, std::move(*body));
    });

    http.Get("/graph", [this](const httplib::Request& req, httplib::Response& res) {
      Snapshot snap;
      if (auto since = query_u64(req, "since")) {
        snap = store.wait_for_change(*since, options.long_poll_timeout);
      } else {
        snap = store.snapshot();
      }
      res.set_header(kGenerationHeader, std::to_string(snap.generation));
      send_json(res, 200, snapshot_graph(*snap.experiment, snap.generation));
    });

    http.Post("/save", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      if (!body->contains("path")) return send_error(res, 400, "body needs \"path\"");
      const auto path = (*body)["path"].get<std::string>();
      try {
        const auto generation = store.save(path);
        send_json(res, 200, {{"status", "ok"}, {"path", path}, {"generation", generation}});
      } catch (const Error& e) {
        send_error(res, 500, e.what());
      }
    });
    http.Post("/load", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      if (!body->contains("path")) return send_error(res, 400, "body needs \"path\"");
      const auto path = (*body)["path"].get<std::string>();
      try {
        const auto generation = store.load(path);
        send_json(res, 200, {{"status", "ok"}, {"path", path}, {"generation", generation}});
      } catch (const IntegrityError& e) {
        send_error(res, 409, e.what());
      } catch (const ParseError& e) {
        send_error(res, 400, e.what());
      } catch (const ValidationError& e) {
        send_error(res, 400, e.what());
      } catch (const Error& e) {
        send_error(res, 500, e.what());
      }
    });
  }
};

Server::Server(ExperimentStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, options)) {}

Server::~Server() { stop(); }

int Server::bind(const BindAddress& address) {
  if (address.port == 0) {
    const int port = impl_->http.bind_to_any_port(address.host);
    if (port < 0) throw Error("cannot bind " + address.host);
    return port;
  }
  if (!impl_->http.bind_to_port(address.host, address.port)) {
    throw Error("cannot bind " + address.to_string() + " (address in use?)");
  }
  return address.port;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace netcarta::daemon
