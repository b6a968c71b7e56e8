#include "lrrl/checkpoint.hpp"

#include "binary_io.hpp"
#include "lrrl/errors.hpp"

namespace lrrl {

namespace {
constexpr char kMagic[4] = {'L', 'R', 'R', 'L'};
constexpr uint32_t kVersion = 1;
}  // namespace

void save_mlp(const Mlp& mlp, const std::filesystem::path& path) {
  io::Writer w(path);
  w.magic(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<uint32_t>(mlp.layer_sizes.size()));
  for (int n : mlp.layer_sizes) w.u32(static_cast<uint32_t>(n));
  for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
    const Mat& wt = mlp.weights[l];
    for (Eigen::Index i = 0; i < wt.rows(); ++i) {
      for (Eigen::Index j = 0; j < wt.cols(); ++j) {
        w.f32(static_cast<float>(wt(i, j)));
      }
    }
    for (Eigen::Index i = 0; i < mlp.biases[l].size(); ++i) {
      w.f32(static_cast<float>(mlp.biases[l](i)));
    }
  }
  w.close();
}

Mlp load_mlp(const std::filesystem::path& path) {
  io::Reader r(path);
  r.expect_magic(kMagic);
  const uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported version " +
                      std::to_string(version));
  }
  const uint32_t layer_count = r.u32("layer count");
  if (layer_count < 2 || layer_count > 64) {
    throw FormatError(path.string() + ": implausible layer count " +
                      std::to_string(layer_count));
  }
  Mlp mlp;
  for (uint32_t i = 0; i < layer_count; ++i) {
    const uint32_t n = r.u32("layer size");
    if (n < 1) throw FormatError(path.string() + ": zero layer size");
    mlp.layer_sizes.push_back(static_cast<int>(n));
  }
  for (std::size_t l = 0; l + 1 < mlp.layer_sizes.size(); ++l) {
    const int fan_in = mlp.layer_sizes[l];
    const int fan_out = mlp.layer_sizes[l + 1];
    Mat wt(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i) {
      for (int j = 0; j < fan_out; ++j) {
        wt(i, j) = static_cast<double>(r.f32("weight"));
      }
    }
    Vec b(fan_out);
    for (int i = 0; i < fan_out; ++i) {
      b(i) = static_cast<double>(r.f32("bias"));
    }
    mlp.weights.push_back(std::move(wt));
    mlp.biases.push_back(std::move(b));
  }
  r.expect_eof();
  return mlp;
}

namespace {
void quantize(Mat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
  }
}
void quantize(Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v.data()[i] = static_cast<double>(static_cast<float>(v.data()[i]));
  }
}
}  // namespace

void quantize_to_float32(Mlp& mlp) {
  for (auto& w : mlp.weights) quantize(w);
  for (auto& b : mlp.biases) quantize(b);
}

void quantize_to_float32(AdamState& state) {
  for (auto& m : state.m_w) quantize(m);
  for (auto& m : state.v_w) quantize(m);
  for (auto& v : state.m_b) quantize(v);
  for (auto& v : state.v_b) quantize(v);
}

}  // namespace lrrl
