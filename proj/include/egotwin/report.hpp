#pragma once

// Evaluation reports: a JSON document carrying every number plus the seeds
// and parameters behind it, a markdown comparison table, and SVG plots.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "egotwin/metrics.hpp"
#include "egotwin/segmentation.hpp"

namespace egotwin {

/// Published comparison values, echoed in report footnotes and never recomputed.
struct PublishedBaselines {
  static constexpr double eth_ade = 0.47;
  static constexpr double eth_fde = 1.01;
  static constexpr double ucy_ade = 0.24;
};

struct ReportRow {
  std::string label;  // e.g. "human / egomotion baseline"
  std::string agent;  // human | robot
  std::string config;  // feature config name, or the predictor name for reference rows
  double lambda = 0.0;  // NaN-free: 0 for non-ridge rows
  ConfigResult result;
};

struct Provenance {
  std::uint64_t corpus_seed = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t ensemble_seed = 0;
  std::size_t ensemble_count = 0;
  double ensemble_sigma = 0.0;
  std::string kde_rule = "scott";
  double kde_bandwidth_floor = kBandwidthFloor;
  double kde_density_floor = kDensityFloor;
  std::size_t stride = 0;
  std::string model_scope = "per feature configuration; human configs train on human sessions, robot on robot sessions";
  std::string corpus_config_json;  // the simulator parameters, verbatim
  std::vector<std::uint32_t> train_sessions;
  std::vector<std::uint32_t> validation_sessions;
  std::vector<std::uint32_t> test_sessions;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  Provenance provenance;
  std::vector<std::string> notes;
};

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);
std::string report_to_markdown(const EvalReport& report);

// ---------------------------------------------------------------------------
// SVG plots

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = false;
  bool legend = true;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool equal_aspect = false;
  std::vector<PlotSeries> series;
};

/// Panels laid out left to right in one SVG document.
std::string render_svg(const std::vector<PlotPanel>& panels, const std::string& title = {});

/// Mean displacement against horizon time for every row.
std::string displacement_plot(const EvalReport& report, double frame_seconds = 0.1);

}  // namespace egotwin
