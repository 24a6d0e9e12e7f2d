#include "cli/backend.hpp"

#include <httplib.h>

#include "netcarta/error.hpp"
#include "netcarta/ir/serialize.hpp"

namespace netcarta::cli {

namespace {

class FileBackend final : public Backend {
 public:
  explicit FileBackend(std::filesystem::path path) : path_(std::move(path)) {}

  Experiment fetch() override {
    if (!std::filesystem::exists(path_)) return Experiment{};
    return load_experiment(path_);
  }

  daemon::GraphSnapshot graph() override { return daemon::snapshot_graph(fetch(), 0); }

  daemon::ApplyResult apply(const std::vector<daemon::Mutation>& batch) override {
    Experiment experiment = fetch();
    daemon::ApplyResult combined;
    for (const auto& mutation : batch) {
      auto result = daemon::apply_to(experiment, mutation);
      combined.affected.insert(combined.affected.end(), result.affected.begin(),
                               result.affected.end());
      combined.diagnostics.insert(combined.diagnostics.end(), result.diagnostics.begin(),
                                  result.diagnostics.end());
    }
    save_experiment(experiment, path_);
    return combined;
  }

  void transact(const std::function<void(Experiment&)>& edit) override {
    Experiment experiment = fetch();
    edit(experiment);
    save_experiment(experiment, path_);
  }

  void save(const std::filesystem::path& path) override { save_experiment(fetch(), path); }

  void load(const std::filesystem::path& path) override {
    save_experiment(load_experiment(path), path_);
  }

 private:
  std::filesystem::path path_;
};

constexpr const char* kJson = "application/json";

class ServerBackend final : public Backend {
 public:
  explicit ServerBackend(const std::string& url) : url_(url), client_(url) {
    if (!client_.is_valid()) throw ConfigError("invalid server URL '" + url + "'");
    client_.set_connection_timeout(std::chrono::seconds(5));
    client_.set_read_timeout(std::chrono::seconds(60));
    client_.set_write_timeout(std::chrono::seconds(60));
  }

  Experiment fetch() override { return deserialize(get("/experiment")->body); }

  daemon::GraphSnapshot graph() override {
    return nlohmann::json::parse(get("/graph")->body).get<daemon::GraphSnapshot>();
  }

  daemon::ApplyResult apply(const std::vector<daemon::Mutation>& batch) override {
    daemon::ApplyResult combined;
    std::vector<nlohmann::json> upserts;
    auto flush_upserts = [&] {
      if (upserts.empty()) return;
      merge(combined, post("/observations", nlohmann::json(upserts)));
      upserts.clear();
    };
    for (const auto& mutation : batch) {
      switch (mutation.kind) {
        case daemon::MutationKind::upsert_endpoint:
          upserts.push_back(mutation.payload);
          break;
        case daemon::MutationKind::link_routers:
          flush_upserts();
          merge(combined, post("/routers", mutation.payload));
          break;
        case daemon::MutationKind::ingest_traceroute:
          flush_upserts();
          merge(combined, post("/traceroutes", mutation.payload));
          break;
        default:
          throw ConfigError("mutation '" + std::string(daemon::to_string(mutation.kind)) +
                            "' has no client route");
      }
    }
    flush_upserts();
    return combined;
  }

  void transact(const std::function<void(Experiment&)>& edit) override {
    constexpr int kAttempts = 5;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      auto res = get("/experiment");
      const std::string generation = res->get_header_value("X-Netcarta-Generation");
      Experiment experiment = deserialize(res->body);
      edit(experiment);
      auto put = client_.Put("/experiment?generation=" + generation, serialize(experiment), kJson);
      check_transport(put);
      if (put->status == 409 && attempt + 1 < kAttempts) continue;
      check_status(put);
      return;
    }
  }

  void save(const std::filesystem::path& path) override {
    post("/save", {{"path", std::filesystem::absolute(path).string()}});
  }

  void load(const std::filesystem::path& path) override {
    post("/load", {{"path", std::filesystem::absolute(path).string()}});
  }

 private:
  void check_transport(const httplib::Result& res) const {
    if (!res) {
      throw Error("cannot reach netcarta daemon at " + url_ + ": " +
                  httplib::to_string(res.error()));
    }
  }

  static void check_status(const httplib::Result& res) {
    if (res->status >= 200 && res->status < 300) return;
    std::string message = "daemon answered " + std::to_string(res->status);
    try {
      auto body = nlohmann::json::parse(res->body);
      if (body.contains("error")) message += ": " + body["error"].get<std::string>();
    } catch (const nlohmann::json::exception&) {
      message += ": " + res->body;
    }
    if (res->status == 404) throw NotFoundError(message);
    if (res->status == 409) throw IntegrityError(message);
    if (res->status == 400) throw ValidationError(message);
    throw Error(message);
  }

  httplib::Result get(const std::string& path) {
    auto res = client_.Get(path);
    check_transport(res);
    check_status(res);
    return res;
  }

  daemon::ApplyResult post(const std::string& path, const nlohmann::json& body) {
    auto res = client_.Post(path, body.dump(), kJson);
    check_transport(res);
    check_status(res);
    daemon::ApplyResult result;
    auto reply = nlohmann::json::parse(res->body);
    if (auto it = reply.find("ids"); it != reply.end()) {
      for (const auto& id : *it) result.affected.push_back(Id{id.get<std::uint64_t>()});
    }
    if (auto it = reply.find("diagnostics"); it != reply.end()) {
      result.diagnostics = it->get<std::vector<Diagnostic>>();
    }
    result.generation = reply.value("generation", std::uint64_t{0});
    return result;
  }

  static void merge(daemon::ApplyResult& into, const daemon::ApplyResult& from) {
    into.affected.insert(into.affected.end(), from.affected.begin(), from.affected.end());
    into.diagnostics.insert(into.diagnostics.end(), from.diagnostics.begin(),
                            from.diagnostics.end());
    into.generation = from.generation;
  }

  std::string url_;
  httplib::Client client_;
};

}  // namespace

std::unique_ptr<Backend> make_file_backend(std::filesystem::path path) {
  return std::make_unique<FileBackend>(std::move(path));
}

std::unique_ptr<Backend> make_server_backend(const std::string& url) {
  if (!url.starts_with("http://")) {
    throw ConfigError("server URL '" + url + "' must start with http://");
  }
  return std::make_unique<ServerBackend>(url);
}

}  // namespace netcarta::cli
