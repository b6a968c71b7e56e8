#pragma once

#include <limits>

#include "lrrl/replay.hpp"
#include "lrrl/sac.hpp"

namespace lrrl {

// Target-vs-source domain classifier over concat(s, a, s'). Gaussian input
// noise is injected during training only.
struct DomainClassifier {
  Mlp net;
  AdamState opt;
  double noise_sigma = 1.0;
  double lr = 1e-3;

  static DomainClassifier init(uint64_t seed, int state_dim, int action_dim,
                               const std::vector<int>& hidden = {256, 256},
                               double noise_sigma = 1.0, double lr = 1e-3);
};

struct FilterConfig {
  double gamma = 0.5;  // odds-ratio threshold; infinity drops everything
  long refilter_interval = 1000;
  int classifier_updates_per_step = 1;
  double classifier_lr = 1e-3;
  double noise_sigma = 1.0;
  // When set, re-filtering starts from the current active set instead of
  // the full source set, so the active set can only shrink.
  bool monotone_shrink = false;
};

inline constexpr double kProbClamp = 1e-6;

// The two-classifier reward-correction baseline: c(s,a,s') and c(s,a).
struct DarcClassifiers {
  Mlp c_sas, c_sa;
  AdamState opt_sas, opt_sa;
  double noise_sigma = 1.0;
  double lr = 1e-3;

  static DarcClassifiers init(uint64_t seed, int state_dim, int action_dim,
                              const std::vector<int>& hidden = {256, 256},
                              double noise_sigma = 1.0, double lr = 1e-3);
};

// One cross-entropy step on balanced batches (target label 1, source label
// 0), with N(0, sigma^2) noise added to every input coordinate. Returns the
// loss (probabilities clamped for finiteness).
double classifier_update(DomainClassifier& clf, const Batch& batch_tgt,
                         const Batch& batch_src, Rng& rng);

// Same scheme for the two reward-correction classifiers; c(s,a) sees only
// the (s, a) prefix of the inputs.
double darc_classifier_update(DarcClassifiers& dc, const Batch& batch_tgt,
                              const Batch& batch_src, Rng& rng);

// Classifier probability c(s,a,s') without input noise.
double classifier_prob(const DomainClassifier& clf, const Transition& t);

// c / (1 - c) with clamped probabilities.
double odds_ratio(const DomainClassifier& clf, const Transition& t);

// Keep transitions whose odds ratio is >= gamma, preserving order. Always
// re-runs over the given source set.
ReplayBuffer filter_source(const ReplayBuffer& full_src,
                           const DomainClassifier& clf, double gamma);

// Fraction of each training batch drawn from the current task's buffer;
// ramps linearly from 0.5 at n_target = 0 to 1.0 at n_target = ramp_end.
// ramp_end = 12500 reproduces the published schedule for 50k-step tasks.
double mix_ratio(long n_target, long ramp_end = 12500);

// round(rho * n) target samples, remainder from the active source set,
// uniform within each, concatenated and shuffled. Falls back to whichever
// side is non-empty.
Batch compose_batch(const ReplayBuffer& active_src,
                    const ReplayBuffer& d_target, double rho, std::size_t n,
                    Rng& rng);

// min(0, logit c(s,a,s') - logit c(s,a)): the clipped log dynamics-ratio
// reward correction.
double darc_delta_r(const DarcClassifiers& dc, const Transition& t);

// Squashed-Gaussian density ratio pi_cur(a|s) / pi_prev(a|s), clipped to
// [0.1, 10].
double offpolicy_weight(const Actor& actor_cur, const Actor& actor_prev,
                        const Vec& s, const Vec& a);

}  // namespace lrrl
