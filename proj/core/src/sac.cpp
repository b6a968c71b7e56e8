#include "lrrl/sac.hpp"

#include <cmath>

#include "lrrl/errors.hpp"

namespace lrrl {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

struct PolicyHead {
  ForwardCache cache;
  Mat mean;       // B x A
  Mat log_std;    // clamped
  Mat std;
  Mat clamp_mask; // 1 where raw log-std inside [min, max]
};

PolicyHead policy_forward(const Actor& actor, const Mat& S) {
  PolicyHead head;
  Mat out = mlp_forward_cached(actor.net, S, head.cache);
  const int a_dim = actor.action_dim;
  head.mean = out.leftCols(a_dim);
  Mat raw = out.rightCols(a_dim);
  head.clamp_mask = ((raw.array() > kLogStdMin) && (raw.array() < kLogStdMax))
                        .cast<double>()
                        .matrix();
  head.log_std = raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  head.std = head.log_std.array().exp().matrix();
  return head;
}

// Draw standard normals row by row so the consumption order of the rng is
// well defined.
Mat draw_normals(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat xi(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) xi(i, j) = rng.normal();
  }
  return xi;
}

// Per-row log pi(a|s) for a = tanh(mean + std * xi).
Vec squashed_log_prob(const PolicyHead& head, const Mat& xi, const Mat& a) {
  Eigen::ArrayXXd terms = -kHalfLog2Pi - head.log_std.array() -
                          0.5 * xi.array().square() -
                          (1.0 - a.array().square() + kTanhGuard).log();
  return terms.rowwise().sum().matrix();
}

Mat concat_cols(const Mat& a, const Mat& b) {
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

Agent Agent::init(uint64_t seed, int state_dim, int action_dim,
                  const SacConfig& config) {
  Agent agent;
  agent.state_dim = state_dim;
  std::vector<int> actor_sizes = {state_dim};
  std::vector<int> critic_sizes = {state_dim + action_dim};
  for (int h : config.hidden) {
    actor_sizes.push_back(h);
    critic_sizes.push_back(h);
  }
  actor_sizes.push_back(2 * action_dim);
  critic_sizes.push_back(1);
  agent.actor.net = mlp_init(derive_seed(seed, "actor"), actor_sizes);
  agent.actor.opt = AdamState::zeros_like(agent.actor.net);
  agent.actor.action_dim = action_dim;
  agent.critics.q1 = mlp_init(derive_seed(seed, "q1"), critic_sizes);
  agent.critics.q2 = mlp_init(derive_seed(seed, "q2"), critic_sizes);
  agent.critics.q1_target = agent.critics.q1;
  agent.critics.q2_target = agent.critics.q2;
  agent.critics.opt1 = AdamState::zeros_like(agent.critics.q1);
  agent.critics.opt2 = AdamState::zeros_like(agent.critics.q2);
  return agent;
}

ActionSample sample_action(const Actor& actor, const Vec& s, Rng& rng) {
  PolicyHead head = policy_forward(actor, s.transpose());
  Mat xi = draw_normals(1, actor.action_dim, rng);
  Mat u = head.mean + head.std.cwiseProduct(xi);
  Mat a = u.array().tanh().matrix();
  ActionSample out;
  out.action = a.row(0).transpose();
  out.log_prob = squashed_log_prob(head, xi, a)(0);
  return out;
}

Vec mean_action(const Actor& actor, const Vec& s) {
  PolicyHead head = policy_forward(actor, s.transpose());
  return head.mean.row(0).transpose().array().tanh().matrix();
}

double action_log_prob(const Actor& actor, const Vec& s, const Vec& a) {
  PolicyHead head = policy_forward(actor, s.transpose());
  double logp = 0.0;
  for (int j = 0; j < actor.action_dim; ++j) {
    const double aj =
        std::min(std::max(static_cast<double>(a(j)), -1.0 + kTanhGuard),
                 1.0 - kTanhGuard);
    const double u = std::atanh(aj);
    const double sigma = head.std(0, j);
    const double xi = (u - head.mean(0, j)) / sigma;
    logp += -kHalfLog2Pi - head.log_std(0, j) - 0.5 * xi * xi -
            std::log(1.0 - aj * aj + kTanhGuard);
  }
  return logp;
}

CriticLossResult critic_loss(const Agent& agent, const Batch& batch,
                             const SacConfig& config, Rng& rng,
                             const std::vector<double>* weights) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw UsageError("critic_loss: empty batch");
  if (weights != nullptr && static_cast<Eigen::Index>(weights->size()) != n) {
    throw ShapeError("critic_loss: weight count mismatch");
  }
  // Soft value of the next states from one fresh policy sample, evaluated
  // with the target critics; constant w.r.t. the critic parameters.
  PolicyHead next_head = policy_forward(agent.actor, batch.s_next);
  Mat xi = draw_normals(n, agent.actor.action_dim, rng);
  Mat u = next_head.mean + next_head.std.cwiseProduct(xi);
  Mat a_next = u.array().tanh().matrix();
  Vec logp_next = squashed_log_prob(next_head, xi, a_next);
  Mat next_in = concat_cols(batch.s_next, a_next);
  Vec q1t = mlp_forward_batch(agent.critics.q1_target, next_in).col(0);
  Vec qmin_t = q1t;
  if (config.twin_critics) {
    Vec q2t = mlp_forward_batch(agent.critics.q2_target, next_in).col(0);
    qmin_t = q1t.cwiseMin(q2t);
  }
  Vec value = qmin_t - config.temperature * logp_next;
  Vec y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bootstrap = batch.done[static_cast<std::size_t>(i)] ? 0.0 : 1.0;
    y(i) = batch.r(i) + config.discount * bootstrap * value(i);
  }

  Mat in = concat_cols(batch.s, batch.a);
  ForwardCache cache1, cache2;
  Vec q1 = mlp_forward_cached(agent.critics.q1, in, cache1).col(0);
  CriticLossResult result;
  const double inv_n = 1.0 / static_cast<double>(n);
  Vec err1 = q1 - y;
  Vec w = Vec::Ones(n);
  if (weights != nullptr) {
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i) = (*weights)[static_cast<std::size_t>(i)];
    }
  }
  result.loss = inv_n * err1.cwiseProduct(err1).cwiseProduct(w).sum();
  Mat up1 = (2.0 * inv_n * err1.cwiseProduct(w));
  result.grads_q1 = mlp_backward_batch(agent.critics.q1, cache1, up1);
  double q_sum = q1.sum();
  if (config.twin_critics) {
    Vec q2 = mlp_forward_cached(agent.critics.q2, in, cache2).col(0);
    Vec err2 = q2 - y;
    result.loss += inv_n * err2.cwiseProduct(err2).cwiseProduct(w).sum();
    Mat up2 = (2.0 * inv_n * err2.cwiseProduct(w));
    result.grads_q2 = mlp_backward_batch(agent.critics.q2, cache2, up2);
    q_sum = 0.5 * (q_sum + q2.sum());
  }
  result.mean_q = q_sum * inv_n;
  result.mean_entropy = -logp_next.mean();
  return result;
}

ActorLossResult actor_loss(const Agent& agent, const Batch& batch,
                           const SacConfig& config, Rng& rng) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw UsageError("actor_loss: empty batch");
  const int a_dim = agent.actor.action_dim;
  const int s_dim = agent.state_dim;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double alpha = config.temperature;

  PolicyHead head = policy_forward(agent.actor, batch.s);
  Mat xi = draw_normals(n, a_dim, rng);
  Mat u = head.mean + head.std.cwiseProduct(xi);
  Mat a = u.array().tanh().matrix();
  Vec logp = squashed_log_prob(head, xi, a);

  Mat in = concat_cols(batch.s, a);
  ForwardCache cache1, cache2;
  Vec q1 = mlp_forward_cached(agent.critics.q1, in, cache1).col(0);
  Vec qmin = q1;
  Vec q2;
  if (config.twin_critics) {
    q2 = mlp_forward_cached(agent.critics.q2, in, cache2).col(0);
    qmin = q1.cwiseMin(q2);
  }

  ActorLossResult result;
  result.loss = inv_n * (alpha * logp - qmin).sum();

  // d qmin / d input, routing each row through whichever critic is the min.
  Mat dq_din;
  {
    Mat up1 = Mat::Zero(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!config.twin_critics || q1(i) <= q2(i)) up1(i, 0) = 1.0;
    }
    Mat dx1;
    mlp_backward_batch(agent.critics.q1, cache1, up1, &dx1);
    dq_din = dx1;
    if (config.twin_critics) {
      Mat up2 = Mat::Zero(n, 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (q1(i) > q2(i)) up2(i, 0) = 1.0;
      }
      Mat dx2;
      mlp_backward_batch(agent.critics.q2, cache2, up2, &dx2);
      dq_din += dx2;
    }
  }
  Mat dq_da = dq_din.rightCols(a_dim);

  // Reparameterized chain rule into the policy head. The log pi terms are
  // differentiated at fixed noise xi; the Q term flows through a = tanh(u).
  Eigen::ArrayXXd one_minus_a2 = 1.0 - a.array().square();
  Eigen::ArrayXXd dlogpi_du =
      2.0 * a.array() * one_minus_a2 / (one_minus_a2 + kTanhGuard);
  Eigen::ArrayXXd dloss_da = -inv_n * dq_da.array();
  Eigen::ArrayXXd dloss_du =
      alpha * inv_n * dlogpi_du + dloss_da * one_minus_a2;
  Mat up_mean = dloss_du.matrix();
  Mat up_log_std =
      ((dloss_du * head.std.array() * xi.array() - alpha * inv_n).matrix())
          .cwiseProduct(head.clamp_mask);
  Mat upstream(n, 2 * a_dim);
  upstream << up_mean, up_log_std;
  result.grads = mlp_backward_batch(agent.actor.net, head.cache, upstream);
  (void)s_dim;
  return result;
}

void polyak(Mlp& target, const Mlp& online, double tau) {
  if (tau < 0.0 || tau > 1.0) throw ConfigError("polyak: tau must be in [0,1]");
  for (std::size_t l = 0; l < target.num_layers(); ++l) {
    target.weights[l] = (1.0 - tau) * target.weights[l] + tau * online.weights[l];
    target.biases[l] = (1.0 - tau) * target.biases[l] + tau * online.biases[l];
  }
}

LossReport sac_update(Agent& agent, const Batch& batch,
                      const SacConfig& config, Rng& rng,
                      const std::vector<double>* critic_weights) {
  Agent next = agent;
  CriticLossResult cl = critic_loss(next, batch, config, rng, critic_weights);
  adam_step(next.critics.q1, cl.grads_q1, next.critics.opt1, config.lr);
  if (config.twin_critics) {
    adam_step(next.critics.q2, cl.grads_q2, next.critics.opt2, config.lr);
  }
  ActorLossResult al = actor_loss(next, batch, config, rng);
  adam_step(next.actor.net, al.grads, next.actor.opt, config.lr);
  polyak(next.critics.q1_target, next.critics.q1, config.tau);
  polyak(next.critics.q2_target, next.critics.q2, config.tau);
  agent = std::move(next);
  LossReport report;
  report.critic_loss = cl.loss;
  report.actor_loss = al.loss;
  report.mean_q = cl.mean_q;
  report.mean_entropy = cl.mean_entropy;
  return report;
}

}  // namespace lrrl
