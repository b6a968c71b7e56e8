#pragma once

#include <filesystem>

#include "lrrl/mlp.hpp"

namespace lrrl {

// Network parameter file, little-endian binary:
//   magic "LRRL" | version u32 | layer_count u32 | layer sizes u32... |
//   per layer: float32 weights (fan_in x fan_out, row-major), float32 biases.
// Parameters are stored in float32, so save(load(path)) is byte-identical.
void save_mlp(const Mlp& mlp, const std::filesystem::path& path);
Mlp load_mlp(const std::filesystem::path& path);

// Round every parameter to float32 precision, matching what a save/load
// round trip would produce.
void quantize_to_float32(Mlp& mlp);
void quantize_to_float32(AdamState& state);

}  // namespace lrrl
