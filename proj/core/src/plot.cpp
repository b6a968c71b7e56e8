#include "lrrl/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "lrrl/errors.hpp"

namespace lrrl {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_metrics_svg(
    const std::vector<std::pair<std::string, MetricsTable>>& series) {
  if (series.empty()) throw UsageError("render_metrics_svg: no series");
  long max_step = 1;
  for (const auto& [name, table] : series) {
    (void)name;
    for (const MetricsRow& row : table) {
      max_step = std::max(max_step, row.global_step);
    }
  }
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](long step) {
    return kMarginLeft + plot_w * static_cast<double>(step) /
                             static_cast<double>(max_step);
  };
  auto sy = [&](double rate) { return kMarginTop + plot_h * (1.0 - rate); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) +
         " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  svg += "<line class=\"axis\" x1=\"" + fmt(kMarginLeft) + "\" y1=\"" +
         fmt(kMarginTop) + "\" x2=\"" + fmt(kMarginLeft) + "\" y2=\"" +
         fmt(kMarginTop + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line class=\"axis\" x1=\"" + fmt(kMarginLeft) + "\" y1=\"" +
         fmt(kMarginTop + plot_h) + "\" x2=\"" + fmt(kMarginLeft + plot_w) +
         "\" y2=\"" + fmt(kMarginTop + plot_h) + "\" stroke=\"black\"/>\n";
  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg += "<text x=\"" + fmt(kMarginLeft - 8.0) + "\" y=\"" +
           fmt(sy(tick) + 4.0) +
           "\" text-anchor=\"end\" font-size=\"12\">" + fmt(tick) +
           "</text>\n";
  }
  svg += "<text x=\"" + fmt(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
         fmt(kHeight - 12.0) +
         "\" text-anchor=\"middle\" font-size=\"12\">environment steps"
         "</text>\n";

  // Task boundaries, taken from the first series.
  {
    const MetricsTable& table = series.front().second;
    std::set<int> seen;
    for (const MetricsRow& row : table) {
      if (row.task_index > 0 && seen.insert(row.task_index).second &&
          row.step_in_task > 0) {
        const long start = row.global_step - row.step_in_task;
        if (start > 0) {
          svg += "<line class=\"task-boundary\" x1=\"" + fmt(sx(start)) +
                 "\" y1=\"" + fmt(kMarginTop) + "\" x2=\"" + fmt(sx(start)) +
                 "\" y2=\"" + fmt(kMarginTop + plot_h) +
                 "\" stroke=\"#bbbbbb\" stroke-dasharray=\"2,4\"/>\n";
        }
      }
    }
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& [name, table] = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    // One polyline per task segment.
    std::size_t i = 0;
    while (i < table.size()) {
      const int task = table[i].task_index;
      std::string points;
      while (i < table.size() && table[i].task_index == task) {
        points += fmt(sx(table[i].global_step)) + "," +
                  fmt(sy(table[i].success_rate)) + " ";
        ++i;
      }
      svg += "<polyline class=\"task-curve\" fill=\"none\" stroke=\"" +
             std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
             points + "\"/>\n";
    }
    // Running lifetime average across all rows so far.
    std::string avg_points;
    double sum = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) {
      sum += table[j].success_rate;
      avg_points += fmt(sx(table[j].global_step)) + "," +
                    fmt(sy(sum / static_cast<double>(j + 1))) + " ";
    }
    if (!table.empty()) {
      svg += "<polyline class=\"lifetime-average\" fill=\"none\" stroke=\"" +
             std::string(color) +
             "\" stroke-width=\"2.5\" stroke-dasharray=\"6,3\" points=\"" +
             avg_points + "\"/>\n";
    }
    svg += "<text class=\"legend\" x=\"" + fmt(kMarginLeft + 10.0) +
           "\" y=\"" + fmt(kMarginTop + 16.0 * static_cast<double>(k + 1)) +
           "\" font-size=\"12\" fill=\"" + color + "\">" + name +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace lrrl
