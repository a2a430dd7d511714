#pragma once

#include "semisup/dataset.hpp"
#include "semisup/model.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace semisup {

enum class Method { Supervised, SelfLearned, EmSoft, Constrained };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// A training strategy applied to a classifier family, e.g. constrained NMC.
struct MethodId {
  Method method = Method::Supervised;
  ClassifierKind kind = ClassifierKind::Nmc;

  friend bool operator==(const MethodId&, const MethodId&) = default;
};

/// "<method>:<classifier>", e.g. "self_learned:nmc".
std::string to_string(const MethodId& id);
MethodId parse_method_id(std::string_view text);

struct ExperimentConfig {
  std::filesystem::path data_dir;
  std::vector<std::string> datasets;
  std::vector<MethodId> methods;
  std::vector<Index> labeled_sizes_nmc{4, 10};
  std::vector<Index> labeled_sizes_lda{100};
  std::vector<Index> unlabeled_sizes{2, 8, 32, 128, 512, 2048};
  int repetitions = 1000;
  std::uint64_t master_seed = 20140101;
  int min_per_class_nmc = 1;
  int min_per_class_lda = 2;
  int max_redraws = 1000;
  int max_replacements = 100;
  int max_iter = 100;
  double em_tol = 1e-6;
  bool stratified = false;
  int workers = 1;

  const std::vector<Index>& labeled_sizes(ClassifierKind kind) const {
    return kind == ClassifierKind::Nmc ? labeled_sizes_nmc : labeled_sizes_lda;
  }
  int min_per_class(ClassifierKind kind) const {
    return kind == ClassifierKind::Nmc ? min_per_class_nmc : min_per_class_lda;
  }
};

/// Environment variable holding the default data directory.
inline constexpr const char* kDataDirEnv = "SEMISUP_DATA_DIR";

/// Data directory from SEMISUP_DATA_DIR (else "data"), all eight registry
/// names; supervised, self-learned and constrained for
/// both NMC and LDA.
ExperimentConfig default_config();

/// Throws InvalidConfig on any violated invariant.
void check_config(const ExperimentConfig& config);

/// Flat `key = value` text, '#' comments, comma-separated lists. Keys mirror
/// the ExperimentConfig fields; unknown keys are rejected. A relative
/// data_dir is resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

/// SplitMix64 output function (Steele, Lea and Flood 2014).
std::uint64_t mix64(std::uint64_t x);

/// 64-bit FNV-1a of the bytes of `text`.
std::uint64_t hash_string(std::string_view text);

struct RepSeeds {
  std::uint64_t labeled = 0;
  std::uint64_t unlabeled = 0;
};

/// Stateless per-repetition seeds. The labeled stream depends on master
/// seed, data set, method, n_labeled, repetition and replacement attempt;
/// the unlabeled stream additionally on n_unlabeled.
RepSeeds rep_seeds(std::uint64_t master_seed, std::string_view dataset, const MethodId& method, Index n_labeled,
                   Index n_unlabeled, int rep, int attempt);

// ---------------------------------------------------------------------------
// Drawing and running
// ---------------------------------------------------------------------------

struct DrawOptions {
  int min_per_class = 1;
  int max_redraws = 1000;
  bool stratified = false;
};

struct TrainingDraw {
  Dataset labeled;
  FeatureMatrix unlabeled;
  std::vector<Index> labeled_indices;
  std::vector<Index> unlabeled_indices;
  int redraws = 0;  // rejected labeled draws before acceptance
};

/// With-replacement labeled draw, redrawn wholesale until every class has
/// min_per_class members, then an independent with-replacement unlabeled draw
/// whose labels are discarded. Throws RedrawLimitExceeded after max_redraws
/// rejections. With `stratified`, min_per_class objects are drawn from each
/// class first and the rest from the whole set, so no redraw is needed.
TrainingDraw draw_training_sets(const Dataset& data, Index n_labeled, Index n_unlabeled, const RepSeeds& seeds,
                                const DrawOptions& options);

/// Outcome of one repetition.
struct RepRecord {
  int rep = 0;
  int attempt = 0;  // > 0 when the repetition was replaced
  double error = 0.0;
  double joint_ll = 0.0;
  double marginal_ll = 0.0;
  int redraws = 0;
  bool variance_clamped = false;
  bool ridge_applied = false;
  bool psd_repaired = false;
  int iterations = 0;  // self-learning and EM only
  bool converged = true;
  bool objective_monotone = true;  // self-learning: non-decreasing within 1e-10
};

struct CurveCell {
  std::string dataset;
  MethodId method;
  Index n_labeled = 0;
  Index n_unlabeled = 0;
  double mean_error = 0.0, sd_error = 0.0, se_error = 0.0;
  double mean_joint_ll = 0.0, sd_joint_ll = 0.0, se_joint_ll = 0.0;
  double mean_marginal_ll = 0.0, sd_marginal_ll = 0.0, se_marginal_ll = 0.0;
  int n_reps = 0;
  Index degenerate_draw_count = 0;  // rejected labeled draws over all repetitions
};

/// Mean, sample standard deviation (0 for one value) and standard error, in
/// the given order with compensated sums.
struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
};
Summary summarize(const std::vector<double>& values);

/// Aggregate per-repetition records (in repetition order) into a cell.
CurveCell aggregate_cell(std::string dataset, const MethodId& method, Index n_labeled, Index n_unlabeled,
                         const std::vector<RepRecord>& records);

/// Fit `method` on one draw and evaluate on the full data set.
RepRecord run_repetition(const Dataset& data, const MethodId& method, const TrainingDraw& draw,
                         const ExperimentConfig& config);

/// All repetitions of one grid cell, evaluated on the full data set. Runs on
/// config.workers threads; results do not depend on the worker count.
/// `records`, when given, receives the per-repetition log in rep order.
CurveCell run_cell(const Dataset& data, const MethodId& method, Index n_labeled, Index n_unlabeled,
                   const ExperimentConfig& config, std::vector<RepRecord>* records = nullptr);

struct CellRecords {
  CurveCell cell;
  std::vector<RepRecord> records;
};

/// Called once per finished cell, in grid order.
using CellCallback = std::function<void(const CellRecords&)>;

/// Cells in grid order: data set, method, labeled size, unlabeled size.
std::vector<CurveCell> run_grid(const ExperimentConfig& config, const std::vector<Dataset>& datasets,
                                const CellCallback& on_cell = {});

/// Loads each configured data set from `<data_dir>/<name>.csv` (validated
/// against the registry when the name is registered) and runs the grid.
std::vector<CurveCell> run_grid(const ExperimentConfig& config, const CellCallback& on_cell = {});

/// Load one configured data set as run_grid does.
Dataset load_configured_dataset(const ExperimentConfig& config, const std::string& name);

}  // namespace semisup
