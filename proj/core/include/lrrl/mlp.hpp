#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "lrrl/rng.hpp"

namespace lrrl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Fully-connected network with ReLU hidden activations and an identity
// output layer. Weights are stored fan-in x fan-out so a batched forward
// pass is X * W + b with samples as rows.
struct Mlp {
  std::vector<int> layer_sizes;
  std::vector<Mat> weights;
  std::vector<Vec> biases;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  std::size_t num_layers() const { return weights.size(); }
  std::size_t parameter_count() const;
};

// Per-layer gradients, shape-matching an Mlp.
struct GradientSet {
  std::vector<Mat> dw;
  std::vector<Vec> db;

  bool all_finite() const;
  void scale(double f);
};

// Adam optimizer state. beta1/beta2/epsilon are the usual defaults; only
// the learning rate is exposed per update call.
struct AdamState {
  std::vector<Mat> m_w, v_w;
  std::vector<Vec> m_b, v_b;
  int64_t step_count = 0;

  static AdamState zeros_like(const Mlp& mlp);
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
Mlp mlp_init(uint64_t seed, const std::vector<int>& layer_sizes);

Vec mlp_forward(const Mlp& mlp, const Vec& x);

// Batched forward; rows of X are samples.
Mat mlp_forward_batch(const Mlp& mlp, const Mat& X);

// Post-activation values of every layer (acts[0] is the input batch),
// kept around for the backward pass.
struct ForwardCache {
  std::vector<Mat> acts;
};

Mat mlp_forward_cached(const Mlp& mlp, const Mat& X, ForwardCache& cache);

// Reverse-mode gradients of sum_i upstream_i . output_i w.r.t. every
// parameter. The ReLU subgradient at exactly 0 is taken as 0. If dX is
// non-null it receives the gradient w.r.t. the input batch.
GradientSet mlp_backward_batch(const Mlp& mlp, const ForwardCache& cache,
                               const Mat& upstream, Mat* dX = nullptr);

// Single-sample convenience wrapper; input gradient returned through dx.
GradientSet mlp_backward(const Mlp& mlp, const Vec& x, const Vec& upstream,
                         Vec* dx = nullptr);

// One Adam step with bias correction. Throws NumericError on non-finite
// gradients without touching the parameters.
void adam_step(Mlp& mlp, const GradientSet& grads, AdamState& state,
               double lr);

// Max relative error between analytic gradients and central finite
// differences of sum(output) at input x. Test harness for the backward
// pass; h below ~1e-8 is dominated by cancellation and unreliable.
double finite_diff_check(const Mlp& mlp, const Vec& x, double h);

}  // namespace lrrl
