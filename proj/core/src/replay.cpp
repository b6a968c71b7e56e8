#include "lrrl/replay.hpp"

#include "binary_io.hpp"
#include "lrrl/errors.hpp"

namespace lrrl {

void ReplayBuffer::push(Transition t) {
  if (static_cast<int>(t.s.size()) != state_dim_ ||
      static_cast<int>(t.s_next.size()) != state_dim_ ||
      static_cast<int>(t.a.size()) != action_dim_) {
    throw ShapeError("ReplayBuffer::push: transition dimension mismatch");
  }
  transitions_.push_back(std::move(t));
}

std::vector<Transition> ReplayBuffer::sample_transitions(std::size_t n,
                                                         Rng& rng) const {
  if (transitions_.empty()) {
    throw UsageError("ReplayBuffer::sample: buffer is empty");
  }
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(transitions_[rng.uniform_index(transitions_.size())]);
  }
  return out;
}

Batch ReplayBuffer::sample_batch(std::size_t n, Rng& rng) const {
  return make_batch(sample_transitions(n, rng), state_dim_, action_dim_);
}

Batch make_batch(const std::vector<Transition>& transitions, int state_dim,
                 int action_dim) {
  const Eigen::Index n = static_cast<Eigen::Index>(transitions.size());
  Batch b;
  b.s.resize(n, state_dim);
  b.a.resize(n, action_dim);
  b.s_next.resize(n, state_dim);
  b.r.resize(n);
  b.done.resize(transitions.size());
  b.task_id.resize(transitions.size());
  b.from_source.assign(transitions.size(), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = transitions[static_cast<std::size_t>(i)];
    if (static_cast<int>(t.s.size()) != state_dim ||
        static_cast<int>(t.a.size()) != action_dim) {
      throw ShapeError("make_batch: transition dimension mismatch");
    }
    for (int j = 0; j < state_dim; ++j) {
      b.s(i, j) = t.s[j];
      b.s_next(i, j) = t.s_next[j];
    }
    for (int j = 0; j < action_dim; ++j) b.a(i, j) = t.a[j];
    b.r(i) = t.r;
    b.done[static_cast<std::size_t>(i)] = t.done ? 1 : 0;
    b.task_id[static_cast<std::size_t>(i)] = t.task_id;
  }
  return b;
}

ReplayBuffer aggregate_relabel(const std::vector<const ReplayBuffer*>& buffers,
                               const RewardFunction& target_reward) {
  if (buffers.empty()) return ReplayBuffer();
  const int state_dim = buffers.front()->state_dim();
  const int action_dim = buffers.front()->action_dim();
  for (const ReplayBuffer* b : buffers) {
    if (b->state_dim() != state_dim || b->action_dim() != action_dim) {
      throw ShapeError("aggregate_relabel: buffers disagree on dimensions");
    }
  }
  ReplayBuffer out(state_dim, action_dim, 0);
  std::vector<double> s(state_dim), a(action_dim), s_next(state_dim);
  for (const ReplayBuffer* b : buffers) {
    for (const Transition& t : b->transitions()) {
      for (int j = 0; j < state_dim; ++j) {
        s[j] = t.s[j];
        s_next[j] = t.s_next[j];
      }
      for (int j = 0; j < action_dim; ++j) a[j] = t.a[j];
      Transition relabeled = t;
      relabeled.r = static_cast<float>(target_reward(s, a, s_next));
      out.push(std::move(relabeled));
    }
  }
  return out;
}

namespace {
constexpr char kMagic[4] = {'L', 'R', 'R', 'B'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_buffer(const ReplayBuffer& buffer,
                 const std::filesystem::path& path) {
  io::Writer w(path);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<uint32_t>(buffer.state_dim()));
  w.u32(static_cast<uint32_t>(buffer.action_dim()));
  w.u64(buffer.size());
  for (const Transition& t : buffer.transitions()) {
    for (float v : t.s) w.f32(v);
    for (float v : t.a) w.f32(v);
    for (float v : t.s_next) w.f32(v);
    w.f32(t.r);
    w.u8(t.done ? 1 : 0);
    w.u32(t.task_id);
  }
  w.close();
}

ReplayBuffer load_buffer(const std::filesystem::path& path) {
  io::Reader r(path);
  r.expect_magic(kMagic);
  const uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported version " +
                      std::to_string(version));
  }
  const uint32_t state_dim = r.u32("state_dim");
  const uint32_t action_dim = r.u32("action_dim");
  if (state_dim == 0 || state_dim > 4096 || action_dim == 0 ||
      action_dim > 4096) {
    throw FormatError(path.string() + ": implausible dimensions");
  }
  const uint64_t count = r.u64("count");
  std::vector<Transition> loaded;
  loaded.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    Transition t;
    t.s.resize(state_dim);
    t.a.resize(action_dim);
    t.s_next.resize(state_dim);
    for (float& v : t.s) v = r.f32("state");
    for (float& v : t.a) v = r.f32("action");
    for (float& v : t.s_next) v = r.f32("next state");
    t.r = r.f32("reward");
    t.done = r.u8("done flag") != 0;
    t.task_id = r.u32("task_id");
    loaded.push_back(std::move(t));
  }
  r.expect_eof();
  // The file has no buffer-level task tag; adopt the first record's.
  const int task_id = loaded.empty() ? 0 : static_cast<int>(loaded[0].task_id);
  ReplayBuffer buffer(static_cast<int>(state_dim),
                      static_cast<int>(action_dim), task_id);
  for (Transition& t : loaded) buffer.push(std::move(t));
  return buffer;
}

}  // namespace lrrl
