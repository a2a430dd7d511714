#pragma once

#include "semisup/dataset.hpp"
#include "semisup/model.hpp"
#include "semisup/moments.hpp"

#include <vector>

namespace semisup {

inline constexpr int kDefaultMaxIter = 100;
inline constexpr double kDefaultEmTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Moment-constrained estimation
//
// The supervised class means are translated by a common offset so that their
// weighted average equals the overall mean of labeled and unlabeled data. For
// LDA the within-class covariance is then replaced by T_all - B', where B' is
// the between-class scatter of the shifted means about the overall mean, and
// clamped to a positive definite matrix if needed.
// ---------------------------------------------------------------------------

/// Translate every class mean by `overall_mean - sum_k weights_k m_k`.
/// Weights must sum to one. Priors, covariance and report are kept.
GaussianClassifier apply_mean_constraint(const GaussianClassifier& model, const Vector& weights,
                                         const Vector& overall_mean);

/// Class-count weights N_k / N of a labeled sample.
Vector labeled_class_weights(const Dataset& labeled);

/// Supervised NMC, then means shifted with labeled-count weights. The
/// variance is the supervised one.
GaussianClassifier fit_nmc_constrained(const Dataset& labeled, const FeatureMatrix& unlabeled);

/// Supervised LDA priors and means, shifted with prior weights; covariance
/// W' = T_all - B', eigenvalues below 1e-6 * trace(T_all)/d raised to that
/// level. The repair is recorded in the fit report.
GaussianClassifier fit_lda_constrained(const Dataset& labeled, const FeatureMatrix& unlabeled);

GaussianClassifier fit_constrained(ClassifierKind kind, const Dataset& labeled, const FeatureMatrix& unlabeled);

/// ||m_all - sum_k w_k m_k|| / (1 + ||m_all||).
double mean_constraint_residual(const GaussianClassifier& model, const Vector& weights,
                                const Vector& overall_mean);

/// max|B' + W' - T_all| / (1 + max|T_all|) with B' from the model's priors
/// and means about the pooled mean and W' the model covariance.
double scatter_constraint_residual(const GaussianClassifier& model, const MomentStats& moments);

// ---------------------------------------------------------------------------
// Self-learning (hard EM)
// ---------------------------------------------------------------------------

struct SelfLearnTrace {
  int iterations = 0;
  /// Complete-data mean log-likelihood after each refit: labeled objects with
  /// their labels, unlabeled objects with their imputed labels.
  std::vector<double> objective_per_iter;
  std::vector<Index> label_changes_per_iter;
  bool converged = false;
};

struct SelfLearnResult {
  GaussianClassifier model;
  SelfLearnTrace trace;
  std::vector<int> pseudo_labels;
};

/// Start from the supervised fit; each pass labels every unlabeled object
/// with the current model and refits on labeled plus pseudo-labeled data
/// (warm start, relabeling allowed). Converged when a pass leaves every
/// pseudo-label unchanged; stops after `max_iter` passes otherwise.
SelfLearnResult fit_self_learned(ClassifierKind kind, const Dataset& labeled, const FeatureMatrix& unlabeled,
                                 int max_iter = kDefaultMaxIter);

/// Complete-data mean log-likelihood of labeled data plus `unlabeled` under
/// `pseudo_labels`.
double complete_data_objective(const GaussianClassifier& model, const Dataset& labeled,
                               const FeatureMatrix& unlabeled, const std::vector<int>& pseudo_labels);

// ---------------------------------------------------------------------------
// Soft EM
// ---------------------------------------------------------------------------

struct EmTrace {
  int iterations = 0;
  /// Semi-supervised objective, entry 0 for the supervised initialization.
  std::vector<double> objective_per_iter;
  bool converged = false;
};

struct EmResult {
  GaussianClassifier model;
  EmTrace trace;
};

/// sum over labeled of log_joint + sum over unlabeled of log_marginal.
double semi_supervised_objective(const GaussianClassifier& model, const Dataset& labeled,
                                 const FeatureMatrix& unlabeled);

/// EM from the supervised fit. Labeled objects keep one-hot
/// responsibilities; unlabeled ones get posteriors. Stops when an iteration
/// improves the objective by less than `tol` or after `max_iter` M-steps.
EmResult fit_em_soft(ClassifierKind kind, const Dataset& labeled, const FeatureMatrix& unlabeled,
                     int max_iter = kDefaultMaxIter, double tol = kDefaultEmTolerance);

}  // namespace semisup
