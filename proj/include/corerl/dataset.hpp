#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "corerl/common.hpp"

namespace corerl {

// One (s, a, r, s', done) record. States and rewards are float32 on purpose:
// that is what gets serialized; learning code upcasts to double.
struct Transition {
  std::vector<float> state;
  int action = 0;
  float reward = 0.0f;
  std::vector<float> next_state;
  bool done = false;
  uint64_t traj_id = 0;
  uint64_t step = 0;

  bool operator==(const Transition&) const = default;
};

struct DatasetMeta {
  std::string env_id;
  int state_dim = 0;
  int action_count = 0;
  uint64_t transition_count = 0;
  uint64_t traj_count = 0;
  std::string generator_policy;
  uint64_t seed = 0;

  bool operator==(const DatasetMeta&) const = default;
};

struct OfflineDataset {
  DatasetMeta meta;
  std::vector<Transition> transitions;

  bool operator==(const OfflineDataset&) const = default;

  // Enforces every invariant: dims, action range, finiteness, contiguous
  // trajectories, step numbering, done placement, counts vs meta.
  void validate() const;
};

// Writes <stem>.meta.json and <stem>.records (one JSON object per line with
// keys s, a, r, s2, done, traj, t). Rejects non-finite values.
void write_dataset(const OfflineDataset& ds, const std::filesystem::path& stem);

OfflineDataset read_dataset(const std::filesystem::path& stem);

std::vector<Transition> sample_batch(const OfflineDataset& ds, int batch_size, Rng& rng);

// Index-only variant used by the training loops.
std::vector<size_t> sample_indices(size_t n, int batch_size, Rng& rng);

struct RewardStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  std::vector<uint64_t> hist_counts;  // uniform bins over [min, max]
  double bin_width = 0.0;
};

RewardStats dataset_stats(const OfflineDataset& ds, int bin_count = 50);

RewardStats reward_stats(const std::vector<float>& rewards, int bin_count);

std::string reward_hist_csv(const RewardStats& stats);

}  // namespace corerl
