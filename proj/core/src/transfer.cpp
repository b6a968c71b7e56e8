#include "lrrl/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "lrrl/errors.hpp"

namespace lrrl {

namespace {

double clamp_prob(double p) {
  return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

std::vector<int> classifier_sizes(int input_dim,
                                  const std::vector<int>& hidden) {
  std::vector<int> sizes = {input_dim};
  for (int h : hidden) sizes.push_back(h);
  sizes.push_back(1);
  return sizes;
}

Mat batch_inputs(const Batch& b) {
  Mat in(b.size(), b.s.cols() + b.a.cols() + b.s_next.cols());
  in << b.s, b.a, b.s_next;
  return in;
}

Mat add_noise(const Mat& in, double sigma, Rng& rng) {
  Mat noisy = in;
  for (Eigen::Index i = 0; i < noisy.rows(); ++i) {
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
      noisy(i, j) += sigma * rng.normal();
    }
  }
  return noisy;
}

Vec transition_input(const Transition& t) {
  Vec in(t.s.size() + t.a.size() + t.s_next.size());
  Eigen::Index k = 0;
  for (float v : t.s) in(k++) = v;
  for (float v : t.a) in(k++) = v;
  for (float v : t.s_next) in(k++) = v;
  return in;
}

// One binary cross-entropy Adam step on a single-logit network. Rows of
// `in` carry labels 1 (first n_tgt rows) then 0. Returns the clamped loss.
double bce_step(Mlp& net, AdamState& opt, double lr, const Mat& in,
                Eigen::Index n_tgt) {
  ForwardCache cache;
  Vec logits = mlp_forward_cached(net, in, cache).col(0);
  const Eigen::Index n = logits.size();
  double loss = 0.0;
  Mat upstream(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = sigmoid(logits(i));
    const double pc = clamp_prob(p);
    const double label = i < n_tgt ? 1.0 : 0.0;
    loss += label > 0.5 ? -std::log(pc) : -std::log(1.0 - pc);
    upstream(i, 0) = (p - label) / static_cast<double>(n);
  }
  GradientSet grads = mlp_backward_batch(net, cache, upstream);
  adam_step(net, grads, opt, lr);
  return loss / static_cast<double>(n);
}

}  // namespace

DomainClassifier DomainClassifier::init(uint64_t seed, int state_dim,
                                        int action_dim,
                                        const std::vector<int>& hidden,
                                        double noise_sigma, double lr) {
  DomainClassifier clf;
  clf.net = mlp_init(seed, classifier_sizes(2 * state_dim + action_dim, hidden));
  clf.opt = AdamState::zeros_like(clf.net);
  clf.noise_sigma = noise_sigma;
  clf.lr = lr;
  return clf;
}

DarcClassifiers DarcClassifiers::init(uint64_t seed, int state_dim,
                                      int action_dim,
                                      const std::vector<int>& hidden,
                                      double noise_sigma, double lr) {
  DarcClassifiers dc;
  dc.c_sas = mlp_init(derive_seed(seed, "darc_sas"),
                      classifier_sizes(2 * state_dim + action_dim, hidden));
  dc.c_sa = mlp_init(derive_seed(seed, "darc_sa"),
                     classifier_sizes(state_dim + action_dim, hidden));
  dc.opt_sas = AdamState::zeros_like(dc.c_sas);
  dc.opt_sa = AdamState::zeros_like(dc.c_sa);
  dc.noise_sigma = noise_sigma;
  dc.lr = lr;
  return dc;
}

double classifier_update(DomainClassifier& clf, const Batch& batch_tgt,
                         const Batch& batch_src, Rng& rng) {
  if (batch_tgt.size() == 0 || batch_src.size() == 0) {
    throw UsageError("classifier_update: empty batch");
  }
  if (batch_tgt.size() != batch_src.size()) {
    throw UsageError("classifier_update: batches must be balanced");
  }
  Mat in(batch_tgt.size() + batch_src.size(), clf.net.input_size());
  in << batch_inputs(batch_tgt), batch_inputs(batch_src);
  return bce_step(clf.net, clf.opt, clf.lr, add_noise(in, clf.noise_sigma, rng),
                  batch_tgt.size());
}

double darc_classifier_update(DarcClassifiers& dc, const Batch& batch_tgt,
                              const Batch& batch_src, Rng& rng) {
  if (batch_tgt.size() == 0 || batch_src.size() == 0) {
    throw UsageError("darc_classifier_update: empty batch");
  }
  if (batch_tgt.size() != batch_src.size()) {
    throw UsageError("darc_classifier_update: batches must be balanced");
  }
  Mat in(batch_tgt.size() + batch_src.size(), dc.c_sas.input_size());
  in << batch_inputs(batch_tgt), batch_inputs(batch_src);
  Mat noisy = add_noise(in, dc.noise_sigma, rng);
  const double loss_sas =
      bce_step(dc.c_sas, dc.opt_sas, dc.lr, noisy, batch_tgt.size());
  const double loss_sa = bce_step(dc.c_sa, dc.opt_sa, dc.lr,
                                  noisy.leftCols(dc.c_sa.input_size()),
                                  batch_tgt.size());
  return 0.5 * (loss_sas + loss_sa);
}

double classifier_prob(const DomainClassifier& clf, const Transition& t) {
  return sigmoid(mlp_forward(clf.net, transition_input(t))(0));
}

double odds_ratio(const DomainClassifier& clf, const Transition& t) {
  const double c = clamp_prob(classifier_prob(clf, t));
  return c / (1.0 - c);
}

ReplayBuffer filter_source(const ReplayBuffer& full_src,
                           const DomainClassifier& clf, double gamma) {
  ReplayBuffer active(full_src.state_dim(), full_src.action_dim(),
                      full_src.task_id());
  if (full_src.empty()) return active;
  // Batched forward over the whole source set.
  Mat in(full_src.size(), clf.net.input_size());
  for (std::size_t i = 0; i < full_src.size(); ++i) {
    in.row(static_cast<Eigen::Index>(i)) = transition_input(full_src[i]);
  }
  Vec logits = mlp_forward_batch(clf.net, in).col(0);
  for (std::size_t i = 0; i < full_src.size(); ++i) {
    const double c = clamp_prob(sigmoid(logits(static_cast<Eigen::Index>(i))));
    if (c / (1.0 - c) >= gamma) active.push(full_src[i]);
  }
  return active;
}

double mix_ratio(long n_target, long ramp_end) {
  if (n_target < 0) throw UsageError("mix_ratio: negative buffer size");
  if (ramp_end <= 0) return 1.0;
  return std::min(0.5 + 0.5 * static_cast<double>(n_target) /
                            static_cast<double>(ramp_end),
                  1.0);
}

Batch compose_batch(const ReplayBuffer& active_src,
                    const ReplayBuffer& d_target, double rho, std::size_t n,
                    Rng& rng) {
  if (n < 1) throw UsageError("compose_batch: n must be >= 1");
  if (active_src.empty() && d_target.empty()) {
    throw UsageError("compose_batch: both sources empty");
  }
  std::size_t n_tgt = static_cast<std::size_t>(
      std::llround(rho * static_cast<double>(n)));
  n_tgt = std::min(n_tgt, n);
  if (active_src.empty()) n_tgt = n;
  if (d_target.empty()) n_tgt = 0;
  std::vector<Transition> transitions;
  std::vector<uint8_t> from_source;
  transitions.reserve(n);
  from_source.reserve(n);
  if (n_tgt > 0) {
    for (Transition& t : d_target.sample_transitions(n_tgt, rng)) {
      transitions.push_back(std::move(t));
      from_source.push_back(0);
    }
  }
  if (n - n_tgt > 0) {
    for (Transition& t : active_src.sample_transitions(n - n_tgt, rng)) {
      transitions.push_back(std::move(t));
      from_source.push_back(1);
    }
  }
  // Fisher-Yates shuffle.
  for (std::size_t i = transitions.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_index(i);
    std::swap(transitions[i - 1], transitions[j]);
    std::swap(from_source[i - 1], from_source[j]);
  }
  const int state_dim =
      d_target.empty() ? active_src.state_dim() : d_target.state_dim();
  const int action_dim =
      d_target.empty() ? active_src.action_dim() : d_target.action_dim();
  Batch batch = make_batch(transitions, state_dim, action_dim);
  batch.from_source = std::move(from_source);
  return batch;
}

double darc_delta_r(const DarcClassifiers& dc, const Transition& t) {
  Vec in = transition_input(t);
  const double p_sas =
      clamp_prob(sigmoid(mlp_forward(dc.c_sas, in)(0)));
  const double p_sa = clamp_prob(
      sigmoid(mlp_forward(dc.c_sa, in.head(dc.c_sa.input_size()))(0)));
  return std::min(0.0, logit(p_sas) - logit(p_sa));
}

double offpolicy_weight(const Actor& actor_cur, const Actor& actor_prev,
                        const Vec& s, const Vec& a) {
  const double log_ratio =
      action_log_prob(actor_cur, s, a) - action_log_prob(actor_prev, s, a);
  return std::min(std::max(std::exp(log_ratio), 0.1), 10.0);
}

}  // namespace lrrl
