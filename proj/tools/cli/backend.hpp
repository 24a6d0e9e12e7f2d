#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "netcarta/daemon/mutation.hpp"
#include "netcarta/daemon/snapshot.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::cli {

// Where a subcommand reads and writes the experiment: a local file or a
// running daemon.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual Experiment fetch() = 0;
  virtual daemon::GraphSnapshot graph() = 0;

  // Applies the batch atomically.
  virtual daemon::ApplyResult apply(const std::vector<daemon::Mutation>& batch) = 0;

  // Read-modify-write of the whole experiment. A daemon backend re-runs
  // `edit` on fresh state when another writer got in first.
  virtual void transact(const std::function<void(Experiment&)>& edit) = 0;

  virtual void save(const std::filesystem::path& path) = 0;
  virtual void load(const std::filesystem::path& path) = 0;
};

// A missing file reads as an empty experiment and is created on first write.
std::unique_ptr<Backend> make_file_backend(std::filesystem::path path);

// `url` is http://host:port. Throws ConfigError for anything else.
std::unique_ptr<Backend> make_server_backend(const std::string& url);

}  // namespace netcarta::cli
