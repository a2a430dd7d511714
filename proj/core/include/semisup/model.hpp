#pragma once

#include "semisup/dataset.hpp"

#include <Eigen/Cholesky>

#include <string>
#include <string_view>
#include <utility>

namespace semisup {

enum class ClassifierKind { Nmc, Lda };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view text);

/// Regularization and provenance events recorded while fitting.
struct FitReport {
  bool variance_clamped = false;  // NMC variance raised to the floor
  bool ridge_applied = false;     // LDA within-class covariance ridged
  double ridge = 0.0;
  bool psd_repaired = false;      // constrained LDA eigenvalue clamp fired
  int eigenvalues_clamped = 0;
  std::string estimator = "supervised";
};

/// Gaussian class-conditional model with a shared covariance.
///
/// NMC: equal priors and covariance sigma^2 * I. LDA: free priors and a full
/// shared covariance. Instances are immutable once built; the factories
/// validate the parameter invariants and cache the Cholesky factor, so a
/// constructed model always evaluates to finite log-densities.
class GaussianClassifier {
 public:
  /// Equal priors 1/K, means as rows of `means` (K x d), covariance variance*I.
  static GaussianClassifier nmc(Matrix means, double variance, FitReport report = {});

  /// Priors must lie on the simplex (1e-12) and be positive; covariance must
  /// be symmetric (1e-10 relative) and positive definite.
  static GaussianClassifier lda(Vector priors, Matrix means, Matrix covariance, FitReport report = {});

  ClassifierKind kind() const { return kind_; }
  int num_classes() const { return static_cast<int>(means_.rows()); }
  Index dim() const { return means_.cols(); }

  const Vector& priors() const { return priors_; }
  const Vector& log_priors() const { return log_priors_; }
  const Matrix& means() const { return means_; }
  Vector class_mean(int k) const { return means_.row(k).transpose(); }

  /// NMC only: the spherical variance sigma^2.
  double variance() const { return variance_; }

  /// Shared covariance as a d x d matrix (variance * I for NMC).
  Matrix covariance() const;

  const FitReport& report() const { return report_; }

  /// Copy of this model with the fit report replaced.
  GaussianClassifier with_report(FitReport report) const {
    GaussianClassifier copy = *this;
    copy.report_ = std::move(report);
    return copy;
  }

  /// log N(x; m_k, Sigma) in nats.
  double log_density(const Eigen::Ref<const Vector>& x, int k) const;

  /// log pi_k + log N(x; m_k, Sigma) for every class.
  Vector class_log_joint(const Eigen::Ref<const Vector>& x) const;

 private:
  GaussianClassifier() = default;

  ClassifierKind kind_ = ClassifierKind::Nmc;
  Vector priors_;
  Vector log_priors_;
  Matrix means_;
  double variance_ = 0.0;
  Matrix covariance_;
  Eigen::LLT<Matrix> chol_;
  double log_norm_ = 0.0;  // -0.5 * (d log 2pi + log det Sigma)
  FitReport report_;
};

struct EvalResult {
  double error_rate = 0.0;
  double avg_joint_loglik = 0.0;
  double avg_marginal_loglik = 0.0;
  Index n_eval = 0;
};

double log_joint(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x, int y);

/// log sum_k pi_k N(x; m_k, Sigma), max-shifted.
double log_marginal(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x);

Vector posterior(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x);

/// Argmax posterior; ties go to the lowest class index.
int predict(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x);

/// Error rate and mean joint/marginal log-likelihood per object, summed in
/// ascending object order with compensation.
EvalResult evaluate(const GaussianClassifier& model, const Dataset& eval_set);

/// Floor on the NMC variance: 1e-8 * (1 + mean squared feature value of X).
double variance_floor(const FeatureMatrix& features);

GaussianClassifier fit_nmc_supervised(const Dataset& labeled);
GaussianClassifier fit_lda_supervised(const Dataset& labeled);
GaussianClassifier fit_supervised(ClassifierKind kind, const Dataset& labeled);

/// Maximum-likelihood M-step with fractional class memberships.
///
/// `responsibilities` is N x K with rows on the simplex. NMC keeps priors at
/// 1/K and pools a spherical variance; LDA estimates priors and the pooled
/// full covariance. With one-hot rows this is exactly the supervised fit.
/// Throws MissingClass when some class receives zero total weight.
GaussianClassifier fit_weighted(ClassifierKind kind, const FeatureMatrix& features,
                                const Matrix& responsibilities);

/// One-hot N x K responsibility matrix for `labels`.
Matrix one_hot(const std::vector<int>& labels, int num_classes);

}  // namespace semisup
