#pragma once

#include "semisup/experiment.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semisup {

enum class Metric { Error, JointLl, MarginalLl };

std::string_view to_string(Metric metric);
/// "error", "joint_ll" or "marginal_ll"; anything else throws UnknownMetric.
Metric parse_metric(std::string_view text);
std::string_view metric_axis_label(Metric metric);

double cell_mean(const CurveCell& cell, Metric metric);
double cell_se(const CurveCell& cell, Metric metric);
double cell_sd(const CurveCell& cell, Metric metric);

enum class BandKind { StandardError, StandardDeviation };

struct PlotStyle {
  std::string supervised_color = "#000000";
  std::string self_learned_color = "#E8A13A";
  std::string constrained_color = "#3A5FA8";
  std::string em_soft_color = "#8C8C8C";
  double band_opacity = 0.25;
  double line_width = 2.0;
  int width = 640;
  int height = 420;
  BandKind band = BandKind::StandardError;

  const std::string& color(Method method) const;
};

/// One figure: all cells of a (data set, classifier, labeled size) triple.
struct PlotGroup {
  std::string dataset;
  ClassifierKind kind = ClassifierKind::Nmc;
  Index n_labeled = 0;
  std::vector<CurveCell> cells;
};

/// Groups sorted by data set name, classifier and labeled size.
std::vector<PlotGroup> group_cells(const std::vector<CurveCell>& cells);

/// Mean curve per method with a shaded band, over a log2 x-axis whose ticks
/// are the distinct unlabeled sizes of the group. Output depends only on the
/// inputs.
std::string render_svg(const PlotGroup& group, Metric metric, const PlotStyle& style = {});

/// "<dataset>_<classifier>_nl<n>_<metric>.svg"
std::string plot_file_name(const PlotGroup& group, Metric metric);

/// Renders every group into `out_dir` and returns the written paths.
std::vector<std::filesystem::path> write_plots(const std::vector<CurveCell>& cells, Metric metric,
                                               const std::filesystem::path& out_dir, const PlotStyle& style = {});

}  // namespace semisup
