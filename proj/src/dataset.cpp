#include "corerl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "corerl/text_io.hpp"

namespace corerl {

using json = nlohmann::json;

namespace {

std::filesystem::path meta_path(const std::filesystem::path& stem) {
  return std::filesystem::path(stem.string() + ".meta.json");
}

std::filesystem::path records_path(const std::filesystem::path& stem) {
  return std::filesystem::path(stem.string() + ".records");
}

void check_finite(float v, const char* field, size_t idx) {
  if (!std::isfinite(v)) {
    fail("dataset must be finite: record ", idx, " has non-finite ", field);
  }
}

void append_vec(std::string& out, const std::vector<float>& v) {
  out += '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    append_real(out, v[i]);
  }
  out += ']';
}

std::vector<float> to_float_vec(const json& j, const char* field, size_t line_no) {
  if (!j.is_array()) fail("record at line ", line_no, ": field ", field, " is not an array");
  std::vector<float> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) fail("record at line ", line_no, ": field ", field, " has non-numeric entry");
    out.push_back(static_cast<float>(e.get<double>()));
  }
  return out;
}

}  // namespace

void OfflineDataset::validate() const {
  if (meta.state_dim <= 0) fail("meta.state_dim must be positive");
  if (meta.action_count < 1) fail("meta.action_count must be >= 1");
  if (meta.transition_count != transitions.size()) {
    fail("meta.transition_count=", meta.transition_count, " but dataset has ",
         transitions.size(), " transitions");
  }
  uint64_t trajs_seen = 0;
  for (size_t i = 0; i < transitions.size(); ++i) {
    const Transition& tr = transitions[i];
    if (tr.state.size() != static_cast<size_t>(meta.state_dim) ||
        tr.next_state.size() != static_cast<size_t>(meta.state_dim)) {
      fail("record ", i, ": state dim ", tr.state.size(), "/", tr.next_state.size(),
           " does not match meta.state_dim=", meta.state_dim);
    }
    if (tr.action < 0 || tr.action >= meta.action_count) {
      fail("record ", i, ": action ", tr.action, " out of range [0, ", meta.action_count, ")");
    }
    for (float v : tr.state) check_finite(v, "s", i);
    for (float v : tr.next_state) check_finite(v, "s2", i);
    check_finite(tr.reward, "r", i);

    const bool new_traj = (i == 0) || (tr.traj_id != transitions[i - 1].traj_id);
    if (new_traj) {
      ++trajs_seen;
      if (tr.step != 0) fail("record ", i, ": trajectory ", tr.traj_id, " does not start at step 0");
      if (i > 0 && tr.traj_id == transitions[i - 1].traj_id) {
        fail("record ", i, ": trajectory ids must form contiguous runs");
      }
    } else {
      if (transitions[i - 1].done) {
        fail("record ", i, ": transition after done=true within trajectory ", tr.traj_id);
      }
      if (tr.step != transitions[i - 1].step + 1) {
        fail("record ", i, ": step ", tr.step, " does not follow ", transitions[i - 1].step);
      }
    }
  }
  // Contiguity: a traj_id must not reappear after a different one.
  {
    std::vector<uint64_t> ids;
    for (const auto& tr : transitions) {
      if (ids.empty() || ids.back() != tr.traj_id) ids.push_back(tr.traj_id);
    }
    std::vector<uint64_t> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail("trajectory ids must form contiguous runs (an id reappears)");
    }
  }
  if (meta.traj_count != trajs_seen) {
    fail("meta.traj_count=", meta.traj_count, " but dataset has ", trajs_seen, " trajectories");
  }
}

void write_dataset(const OfflineDataset& ds, const std::filesystem::path& stem) {
  ds.validate();

  json meta;
  meta["env_id"] = ds.meta.env_id;
  meta["state_dim"] = ds.meta.state_dim;
  meta["action_count"] = ds.meta.action_count;
  meta["transition_count"] = ds.meta.transition_count;
  meta["traj_count"] = ds.meta.traj_count;
  meta["generator_policy"] = ds.meta.generator_policy;
  meta["seed"] = ds.meta.seed;
  write_file_atomic(meta_path(stem), meta.dump(2) + "\n");

  std::string out;
  out.reserve(ds.transitions.size() * 96);
  for (const Transition& tr : ds.transitions) {
    out += "{\"s\":";
    append_vec(out, tr.state);
    out += ",\"a\":";
    out += std::to_string(tr.action);
    out += ",\"r\":";
    append_real(out, tr.reward);
    out += ",\"s2\":";
    append_vec(out, tr.next_state);
    out += ",\"done\":";
    out += tr.done ? "true" : "false";
    out += ",\"traj\":";
    out += std::to_string(tr.traj_id);
    out += ",\"t\":";
    out += std::to_string(tr.step);
    out += "}\n";
  }
  write_file_atomic(records_path(stem), out);
}

OfflineDataset read_dataset(const std::filesystem::path& stem) {
  OfflineDataset ds;

  json meta;
  try {
    meta = json::parse(read_file(meta_path(stem)));
  } catch (const json::exception& e) {
    fail("malformed meta file ", meta_path(stem).string(), ": ", e.what());
  }
  try {
    ds.meta.env_id = meta.at("env_id").get<std::string>();
    ds.meta.state_dim = meta.at("state_dim").get<int>();
    ds.meta.action_count = meta.at("action_count").get<int>();
    ds.meta.transition_count = meta.at("transition_count").get<uint64_t>();
    ds.meta.traj_count = meta.at("traj_count").get<uint64_t>();
    ds.meta.generator_policy = meta.at("generator_policy").get<std::string>();
    ds.meta.seed = meta.at("seed").get<uint64_t>();
  } catch (const json::exception& e) {
    fail("meta file ", meta_path(stem).string(), " missing field: ", e.what());
  }

  const auto lines = read_lines(records_path(stem));
  ds.transitions.reserve(lines.size());
  static const std::vector<std::string> kKeys = {"s", "a", "r", "s2", "done", "traj", "t"};
  for (size_t i = 0; i < lines.size(); ++i) {
    const size_t line_no = i + 1;
    if (lines[i].empty()) fail("empty record at line ", line_no);
    json rec;
    try {
      rec = json::parse(lines[i]);
    } catch (const json::exception& e) {
      fail("malformed record at line ", line_no, ": ", e.what());
    }
    for (const auto& k : kKeys) {
      if (!rec.contains(k)) fail("record at line ", line_no, ": missing key '", k, "'");
    }
    if (rec.size() != kKeys.size()) fail("record at line ", line_no, ": unexpected extra keys");
    Transition tr;
    tr.state = to_float_vec(rec["s"], "s", line_no);
    if (!rec["a"].is_number_integer()) fail("record at line ", line_no, ": 'a' is not an integer");
    tr.action = rec["a"].get<int>();
    if (!rec["r"].is_number()) fail("record at line ", line_no, ": 'r' is not a number");
    tr.reward = static_cast<float>(rec["r"].get<double>());
    tr.next_state = to_float_vec(rec["s2"], "s2", line_no);
    if (!rec["done"].is_boolean()) fail("record at line ", line_no, ": 'done' is not a boolean");
    tr.done = rec["done"].get<bool>();
    tr.traj_id = rec["traj"].get<uint64_t>();
    tr.step = rec["t"].get<uint64_t>();
    ds.transitions.push_back(std::move(tr));
  }

  if (ds.meta.transition_count != ds.transitions.size()) {
    fail("meta says transition_count=", ds.meta.transition_count, " but record file has ",
         ds.transitions.size(), " lines");
  }
  ds.validate();
  return ds;
}

std::vector<size_t> sample_indices(size_t n, int batch_size, Rng& rng) {
  if (n == 0) fail("sample_batch: dataset is empty");
  if (batch_size <= 0) fail("sample_batch: batch_size must be positive");
  std::vector<size_t> idx(static_cast<size_t>(batch_size));
  for (auto& i : idx) i = static_cast<size_t>(rng.uniform_u64(n));
  return idx;
}

std::vector<Transition> sample_batch(const OfflineDataset& ds, int batch_size, Rng& rng) {
  const auto idx = sample_indices(ds.transitions.size(), batch_size, rng);
  std::vector<Transition> batch;
  batch.reserve(idx.size());
  for (size_t i : idx) batch.push_back(ds.transitions[i]);
  return batch;
}

RewardStats reward_stats(const std::vector<float>& rewards, int bin_count) {
  if (rewards.empty()) fail("dataset_stats: dataset is empty");
  if (bin_count <= 0) fail("dataset_stats: bin_count must be positive");
  RewardStats st;
  double sum = 0.0;
  st.min = rewards[0];
  st.max = rewards[0];
  for (float r : rewards) {
    sum += r;
    st.min = std::min(st.min, static_cast<double>(r));
    st.max = std::max(st.max, static_cast<double>(r));
  }
  st.mean = sum / static_cast<double>(rewards.size());
  double sq = 0.0;
  for (float r : rewards) {
    const double d = r - st.mean;
    sq += d * d;
  }
  st.stddev = std::sqrt(sq / static_cast<double>(rewards.size()));

  st.hist_counts.assign(static_cast<size_t>(bin_count), 0);
  const double range = st.max - st.min;
  st.bin_width = range > 0 ? range / bin_count : 0.0;
  for (float r : rewards) {
    size_t bin = 0;
    if (range > 0) {
      bin = static_cast<size_t>((r - st.min) / range * bin_count);
      if (bin >= static_cast<size_t>(bin_count)) bin = static_cast<size_t>(bin_count) - 1;
    }
    ++st.hist_counts[bin];
  }
  return st;
}

RewardStats dataset_stats(const OfflineDataset& ds, int bin_count) {
  std::vector<float> rewards;
  rewards.reserve(ds.transitions.size());
  for (const auto& tr : ds.transitions) rewards.push_back(tr.reward);
  return reward_stats(rewards, bin_count);
}

std::string reward_hist_csv(const RewardStats& stats) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (size_t i = 0; i < stats.hist_counts.size(); ++i) {
    const double lo = stats.min + stats.bin_width * static_cast<double>(i);
    const double hi = (i + 1 == stats.hist_counts.size()) ? stats.max : lo + stats.bin_width;
    out += fmt_real(lo);
    out += ',';
    out += fmt_real(hi);
    out += ',';
    out += std::to_string(stats.hist_counts[i]);
    out += '\n';
  }
  return out;
}

}  // namespace corerl
