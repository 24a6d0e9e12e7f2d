#include "netcarta/daemon/store.hpp"

#include "netcarta/error.hpp"
#include "netcarta/ir/serialize.hpp"

namespace netcarta::daemon {

ExperimentStore::ExperimentStore(Experiment initial)
    : current_(std::make_shared<const Experiment>(std::move(initial))) {}

Snapshot ExperimentStore::snapshot() const {
  std::lock_guard lock(published_mutex_);
  return Snapshot{current_, generation_};
}

void ExperimentStore::publish(std::shared_ptr<const Experiment> experiment,
                              std::uint64_t generations) {
  {
    std::lock_guard lock(published_mutex_);
    current_ = std::move(experiment);
    generation_ += generations;
  }
  changed_.notify_all();
}

ApplyResult ExperimentStore::apply(const Mutation& mutation) {
  return apply(std::span<const Mutation>(&mutation, 1));
}

ApplyResult ExperimentStore::apply(std::span<const Mutation> batch) {
  std::lock_guard writer(writer_);
  const auto base = snapshot();
  ApplyResult combined;
  combined.generation = base.generation;
  if (batch.empty()) return combined;

  auto working = std::make_shared<Experiment>(*base.experiment);
  std::uint64_t generation = base.generation;
  for (const auto& mutation : batch) {
    if (mutation.expected_generation && *mutation.expected_generation != generation) {
      combined.status = ApplyStatus::conflict;
      combined.message = "expected generation " +
                         std::to_string(*mutation.expected_generation) + ", store is at " +
                         std::to_string(generation);
      combined.affected.clear();
      combined.generation = base.generation;
      return combined;
    }
    ApplyResult result;
    try {
      result = apply_to(*working, mutation);
    } catch (const NotFoundError& e) {
      result.status = ApplyStatus::not_found;
      result.message = e.what();
    } catch (const IntegrityError& e) {
      result.status = ApplyStatus::conflict;
      result.message = e.what();
    } catch (const Error& e) {
      result.status = ApplyStatus::invalid;
      result.message = e.what();
    } catch (const nlohmann::json::exception& e) {
      result.status = ApplyStatus::invalid;
      result.message = e.what();
    }
    if (!result.accepted()) {
      result.generation = base.generation;
      result.affected.clear();
      return result;
    }
    ++generation;
    if (result.status == ApplyStatus::created) combined.status = ApplyStatus::created;
    combined.affected.insert(combined.affected.end(), result.affected.begin(),
                             result.affected.end());
    combined.diagnostics.insert(combined.diagnostics.end(), result.diagnostics.begin(),
                                result.diagnostics.end());
  }
  publish(std::move(working), generation - base.generation);
  combined.generation = generation;
  return combined;
}

Snapshot ExperimentStore::wait_for_change(std::uint64_t since,
                                          std::chrono::milliseconds timeout) const {
  std::unique_lock lock(published_mutex_);
  changed_.wait_for(lock, timeout, [&] { return generation_ > since; });
  return Snapshot{current_, generation_};
}

std::uint64_t ExperimentStore::save(const std::filesystem::path& path) const {
  const auto snap = snapshot();
  save_experiment(*snap.experiment, path);
  return snap.generation;
}

std::uint64_t ExperimentStore::load(const std::filesystem::path& path) {
  auto loaded = std::make_shared<const Experiment>(load_experiment(path));
  std::lock_guard writer(writer_);
  publish(std::move(loaded), 1);
  return snapshot().generation;
}

}  // namespace netcarta::daemon
