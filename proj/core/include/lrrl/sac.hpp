#pragma once

#include <optional>
#include <vector>

#include "lrrl/mlp.hpp"
#include "lrrl/replay.hpp"
#include "lrrl/rng.hpp"

namespace lrrl {

struct SacConfig {
  double discount = 0.99;
  double temperature = 0.2;
  double tau = 0.005;
  double lr = 3e-4;
  int batch_size = 256;
  std::vector<int> hidden = {256, 256};
  bool twin_critics = true;
};

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kTanhGuard = 1e-6;

// Squashed-Gaussian policy. The network maps state -> (mean, log-std),
// both of action dimension; actions are tanh-squashed into (-1, 1)^A.
struct Actor {
  Mlp net;
  AdamState opt;
  int action_dim = 0;
};

// Twin critics over (state (+) action) with Polyak-averaged targets. With
// twin_critics disabled, q2 mirrors q1 and the min reduces to a single
// estimate.
struct CriticEnsemble {
  Mlp q1, q2;
  Mlp q1_target, q2_target;
  AdamState opt1, opt2;
};

struct Agent {
  Actor actor;
  CriticEnsemble critics;
  int state_dim = 0;

  static Agent init(uint64_t seed, int state_dim, int action_dim,
                    const SacConfig& config);
};

struct LossReport {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double mean_q = 0.0;
  double mean_entropy = 0.0;
};

struct ActionSample {
  Vec action;
  double log_prob = 0.0;
};

ActionSample sample_action(const Actor& actor, const Vec& s, Rng& rng);

// Deterministic tanh(mean) action.
Vec mean_action(const Actor& actor, const Vec& s);

// Log-density of a given action under the squashed-Gaussian policy, with
// the tanh change-of-variables correction.
double action_log_prob(const Actor& actor, const Vec& s, const Vec& a);

struct CriticLossResult {
  double loss = 0.0;
  GradientSet grads_q1, grads_q2;
  double mean_q = 0.0;
  double mean_entropy = 0.0;
};

// Bellman-error loss for both critics. Targets use one fresh action sample
// per next state, the min of the two target critics, and are constants
// w.r.t. the critic parameters. Optional per-sample weights scale the
// squared-error terms.
CriticLossResult critic_loss(const Agent& agent, const Batch& batch,
                             const SacConfig& config, Rng& rng,
                             const std::vector<double>* weights = nullptr);

struct ActorLossResult {
  double loss = 0.0;
  GradientSet grads;
};

// Reparameterized surrogate E[alpha log pi(a|s) - min Q(s, a)] with the
// gradient flowing through the sampled action; critics held fixed.
ActorLossResult actor_loss(const Agent& agent, const Batch& batch,
                           const SacConfig& config, Rng& rng);

// target <- (1 - tau) * target + tau * online, elementwise.
void polyak(Mlp& target, const Mlp& online, double tau);

// One combined update: Adam step on both critics, then on the actor, then
// Polyak on the targets. Applied atomically; numeric failures leave the
// agent untouched.
LossReport sac_update(Agent& agent, const Batch& batch,
                      const SacConfig& config, Rng& rng,
                      const std::vector<double>* critic_weights = nullptr);

}  // namespace lrrl
