#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>

#include "netcarta/daemon/mutation.hpp"
#include "netcarta/ir/experiment.hpp"

namespace netcarta::daemon {

// An immutable experiment tagged with the generation that produced it.
struct Snapshot {
  std::shared_ptr<const Experiment> experiment;
  std::uint64_t generation = 0;
};

// Owns the live experiment. Writes are serialized through one writer lock and
// applied to a private copy that is published whole, so readers only ever see
// complete generations. Generation bumps once per applied mutation; rejected
// mutations leave both experiment and generation untouched.
class ExperimentStore {
 public:
  explicit ExperimentStore(Experiment initial = {});

  Snapshot snapshot() const;

  ApplyResult apply(const Mutation& mutation);
  // All-or-nothing: the first failure rejects the whole batch.
  ApplyResult apply(std::span<const Mutation> batch);

  // Blocks until generation > since or the timeout elapses.
  Snapshot wait_for_change(std::uint64_t since, std::chrono::milliseconds timeout) const;

  // Writes the current snapshot through a temporary file and rename.
  std::uint64_t save(const std::filesystem::path& path) const;
  // Replaces the live experiment and bumps the generation. On any error the
  // live experiment is untouched and the error propagates.
  std::uint64_t load(const std::filesystem::path& path);

 private:
  void publish(std::shared_ptr<const Experiment> experiment, std::uint64_t generations);

  std::mutex writer_;
  mutable std::mutex published_mutex_;
  mutable std::condition_variable changed_;
  std::shared_ptr<const Experiment> current_;
  std::uint64_t generation_ = 0;
};

}  // namespace netcarta::daemon
