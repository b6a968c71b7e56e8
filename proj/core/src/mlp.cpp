#include "lrrl/mlp.hpp"

#include <cmath>
#include <string>

#include "lrrl/errors.hpp"

namespace lrrl {

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<std::size_t>(weights[l].size()) + biases[l].size();
  }
  return n;
}

bool GradientSet::all_finite() const {
  for (const auto& m : dw) {
    if (!m.allFinite()) return false;
  }
  for (const auto& v : db) {
    if (!v.allFinite()) return false;
  }
  return true;
}

void GradientSet::scale(double f) {
  for (auto& m : dw) m *= f;
  for (auto& v : db) v *= f;
}

AdamState AdamState::zeros_like(const Mlp& mlp) {
  AdamState s;
  for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
    s.m_w.push_back(Mat::Zero(mlp.weights[l].rows(), mlp.weights[l].cols()));
    s.v_w.push_back(Mat::Zero(mlp.weights[l].rows(), mlp.weights[l].cols()));
    s.m_b.push_back(Vec::Zero(mlp.biases[l].size()));
    s.v_b.push_back(Vec::Zero(mlp.biases[l].size()));
  }
  return s;
}

Mlp mlp_init(uint64_t seed, const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2) {
    throw ConfigError("mlp_init: need at least input and output layer sizes");
  }
  for (int n : layer_sizes) {
    if (n < 1) throw ConfigError("mlp_init: layer sizes must be positive");
  }
  Mlp mlp;
  mlp.layer_sizes = layer_sizes;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    int fan_in = layer_sizes[l];
    int fan_out = layer_sizes[l + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Mat w(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i) {
      for (int j = 0; j < fan_out; ++j) {
        w(i, j) = rng.uniform(-bound, bound);
      }
    }
    mlp.weights.push_back(std::move(w));
    mlp.biases.push_back(Vec::Zero(fan_out));
  }
  return mlp;
}

Mat mlp_forward_cached(const Mlp& mlp, const Mat& X, ForwardCache& cache) {
  if (X.cols() != mlp.input_size()) {
    throw ShapeError("mlp_forward: input has " + std::to_string(X.cols()) +
                     " columns, expected " + std::to_string(mlp.input_size()));
  }
  cache.acts.clear();
  cache.acts.reserve(mlp.num_layers() + 1);
  cache.acts.push_back(X);
  Mat h = X;
  for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
    Mat z = (h * mlp.weights[l]).rowwise() + mlp.biases[l].transpose();
    if (l + 1 < mlp.num_layers()) {
      h = z.cwiseMax(0.0);
    } else {
      h = std::move(z);
    }
    cache.acts.push_back(h);
  }
  return cache.acts.back();
}

Mat mlp_forward_batch(const Mlp& mlp, const Mat& X) {
  ForwardCache cache;
  return mlp_forward_cached(mlp, X, cache);
}

Vec mlp_forward(const Mlp& mlp, const Vec& x) {
  Mat y = mlp_forward_batch(mlp, x.transpose());
  return y.row(0).transpose();
}

GradientSet mlp_backward_batch(const Mlp& mlp, const ForwardCache& cache,
                               const Mat& upstream, Mat* dX) {
  const std::size_t layers = mlp.num_layers();
  if (cache.acts.size() != layers + 1) {
    throw ShapeError("mlp_backward: cache does not match network depth");
  }
  if (upstream.rows() != cache.acts[0].rows() ||
      upstream.cols() != mlp.output_size()) {
    throw ShapeError("mlp_backward: upstream shape mismatch");
  }
  GradientSet grads;
  grads.dw.resize(layers);
  grads.db.resize(layers);
  Mat delta = upstream;
  for (std::size_t l = layers; l-- > 0;) {
    if (l + 1 < layers) {
      // ReLU mask from post-activations; exact zeros pass no gradient.
      delta = delta.cwiseProduct(
          (cache.acts[l + 1].array() > 0.0).cast<double>().matrix());
    }
    grads.dw[l] = cache.acts[l].transpose() * delta;
    grads.db[l] = delta.colwise().sum().transpose();
    if (l > 0 || dX != nullptr) {
      delta = delta * mlp.weights[l].transpose();
    }
  }
  if (dX != nullptr) *dX = delta;
  return grads;
}

GradientSet mlp_backward(const Mlp& mlp, const Vec& x, const Vec& upstream,
                         Vec* dx) {
  ForwardCache cache;
  mlp_forward_cached(mlp, x.transpose(), cache);
  Mat dX;
  GradientSet grads = mlp_backward_batch(mlp, cache, upstream.transpose(),
                                         dx != nullptr ? &dX : nullptr);
  if (dx != nullptr) *dx = dX.row(0).transpose();
  return grads;
}

void adam_step(Mlp& mlp, const GradientSet& grads, AdamState& state,
               double lr) {
  if (grads.dw.size() != mlp.num_layers() ||
      grads.db.size() != mlp.num_layers()) {
    throw ShapeError("adam_step: gradient set does not match network");
  }
  if (lr <= 0.0) throw ConfigError("adam_step: learning rate must be > 0");
  if (!grads.all_finite()) {
    throw NumericError("adam_step: non-finite gradient; parameters untouched");
  }
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(kAdamBeta1, t);
  const double bc2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
    state.m_w[l] = kAdamBeta1 * state.m_w[l] + (1.0 - kAdamBeta1) * grads.dw[l];
    state.v_w[l] = kAdamBeta2 * state.v_w[l] +
                   (1.0 - kAdamBeta2) * grads.dw[l].cwiseProduct(grads.dw[l]);
    mlp.weights[l] -=
        lr * (state.m_w[l] / bc1)
                 .cwiseQuotient(((state.v_w[l] / bc2).cwiseSqrt().array() +
                                 kAdamEpsilon)
                                    .matrix());
    state.m_b[l] = kAdamBeta1 * state.m_b[l] + (1.0 - kAdamBeta1) * grads.db[l];
    state.v_b[l] = kAdamBeta2 * state.v_b[l] +
                   (1.0 - kAdamBeta2) * grads.db[l].cwiseProduct(grads.db[l]);
    mlp.biases[l] -=
        lr * (state.m_b[l] / bc1)
                 .cwiseQuotient(((state.v_b[l] / bc2).cwiseSqrt().array() +
                                 kAdamEpsilon)
                                    .matrix());
  }
}

namespace {

double sum_output(const Mlp& mlp, const Vec& x) {
  return mlp_forward(mlp, x).sum();
}

}  // namespace

double finite_diff_check(const Mlp& mlp, const Vec& x, double h) {
  if (!(h > 0.0) || h > 1e-2) {
    throw ConfigError("finite_diff_check: h must lie in (0, 1e-2]");
  }
  Vec upstream = Vec::Ones(mlp.output_size());
  GradientSet analytic = mlp_backward(mlp, x, upstream, nullptr);
  Mlp probe = mlp;
  double max_rel = 0.0;
  auto check = [&](double& param, double grad) {
    const double saved = param;
    param = saved + h;
    const double fp = sum_output(probe, x);
    param = saved - h;
    const double fm = sum_output(probe, x);
    param = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    const double rel =
        std::abs(grad - numeric) / std::max(1.0, std::abs(grad));
    if (rel > max_rel) max_rel = rel;
  };
  for (std::size_t l = 0; l < probe.num_layers(); ++l) {
    for (Eigen::Index i = 0; i < probe.weights[l].size(); ++i) {
      check(probe.weights[l].data()[i], analytic.dw[l].data()[i]);
    }
    for (Eigen::Index i = 0; i < probe.biases[l].size(); ++i) {
      check(probe.biases[l].data()[i], analytic.db[l].data()[i]);
    }
  }
  return max_rel;
}

}  // namespace lrrl
