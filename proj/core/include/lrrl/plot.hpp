#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lrrl/lifelong.hpp"

namespace lrrl {

// Render success-rate curves as a standalone SVG document. Each named
// metrics table contributes one polyline per task segment plus one dashed
// polyline for the running lifetime average; task boundaries are marked
// with vertical rules. Multiple tables overlay on shared axes. A pure
// function of its inputs: identical metrics give identical bytes.
std::string render_metrics_svg(
    const std::vector<std::pair<std::string, MetricsTable>>& series);

}  // namespace lrrl
