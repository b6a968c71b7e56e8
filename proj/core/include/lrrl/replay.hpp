#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "lrrl/mlp.hpp"
#include "lrrl/rng.hpp"

namespace lrrl {

// One experience tuple. Vectors are stored in float32 so buffer files
// round-trip bit-exactly.
struct Transition {
  std::vector<float> s;
  std::vector<float> a;
  std::vector<float> s_next;
  float r = 0.0f;
  bool done = false;
  uint32_t task_id = 0;

  bool operator==(const Transition&) const = default;
};

// Matrix view of a sampled batch; rows are samples. from_source marks rows
// drawn from the relabeled source pool (used by the baseline weighting
// schemes).
struct Batch {
  Mat s, a, s_next;
  Vec r;
  std::vector<uint8_t> done;
  std::vector<uint32_t> task_id;
  std::vector<uint8_t> from_source;

  Eigen::Index size() const { return s.rows(); }
};

// Unbounded append-only buffer of transitions for one task (or for the
// aggregated source pool).
class ReplayBuffer {
 public:
  ReplayBuffer() = default;
  ReplayBuffer(int state_dim, int action_dim, int task_id = 0)
      : state_dim_(state_dim), action_dim_(action_dim), task_id_(task_id) {}

  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  int task_id() const { return task_id_; }
  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }

  const Transition& operator[](std::size_t i) const { return transitions_[i]; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  void push(Transition t);

  // n uniform draws with replacement.
  std::vector<Transition> sample_transitions(std::size_t n, Rng& rng) const;
  Batch sample_batch(std::size_t n, Rng& rng) const;

  bool operator==(const ReplayBuffer&) const = default;

 private:
  std::vector<Transition> transitions_;
  int state_dim_ = 0;
  int action_dim_ = 0;
  int task_id_ = 0;
};

Batch make_batch(const std::vector<Transition>& transitions, int state_dim,
                 int action_dim);

using RewardFunction = std::function<double(
    std::span<const double> s, std::span<const double> a,
    std::span<const double> s_next)>;

// Union of all input buffers with every reward replaced by the target
// task's reward evaluated on the stored transition. Inputs are not
// modified; (s, a, s', done, task_id) are preserved.
ReplayBuffer aggregate_relabel(const std::vector<const ReplayBuffer*>& buffers,
                               const RewardFunction& target_reward);

// Buffer file, little-endian binary:
//   magic "LRRB" | version u32 | state_dim u32 | action_dim u32 |
//   count u64 | records (f32 s | f32 a | f32 s' | f32 r | u8 done |
//   u32 task_id).
void save_buffer(const ReplayBuffer& buffer,
                 const std::filesystem::path& path);
ReplayBuffer load_buffer(const std::filesystem::path& path);

}  // namespace lrrl
