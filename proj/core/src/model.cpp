#include "semisup/model.hpp"

#include "semisup/compensated_sum.hpp"
#include "semisup/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace semisup {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

// Ridge policy for the pooled LDA covariance.
constexpr double kRidgeTrigger = 1e-9;
constexpr double kRidgeSize = 1e-6;

double log_sum_exp(const Vector& values) {
  const double top = values.maxCoeff();
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (Index k = 0; k < values.size(); ++k) acc += std::exp(values[k] - top);
  return top + std::log(acc);
}

void check_point(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x) {
  if (x.size() != model.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point has dimension " + std::to_string(x.size()) +
                                                  ", model expects " + std::to_string(model.dim()));
  }
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
  return kind == ClassifierKind::Nmc ? "nmc" : "lda";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
  if (text == "nmc" || text == "NMC") return ClassifierKind::Nmc;
  if (text == "lda" || text == "LDA") return ClassifierKind::Lda;
  throw Error(ErrorCode::InvalidConfig, "unknown classifier '" + std::string(text) + "'");
}

GaussianClassifier GaussianClassifier::nmc(Matrix means, double variance, FitReport report) {
  if (means.rows() < 1 || means.cols() < 1) {
    throw Error(ErrorCode::InvalidModel, "NMC needs at least one class and one dimension");
  }
  if (!means.allFinite()) throw Error(ErrorCode::InvalidModel, "NMC means must be finite");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw Error(ErrorCode::InvalidModel, "NMC variance must be positive and finite");
  }
  GaussianClassifier m;
  m.kind_ = ClassifierKind::Nmc;
  const auto k = means.rows();
  m.priors_ = Vector::Constant(k, 1.0 / static_cast<double>(k));
  m.log_priors_ = m.priors_.array().log();
  m.means_ = std::move(means);
  m.variance_ = variance;
  const auto d = static_cast<double>(m.means_.cols());
  m.log_norm_ = -0.5 * d * (kLog2Pi + std::log(variance));
  m.report_ = std::move(report);
  return m;
}

GaussianClassifier GaussianClassifier::lda(Vector priors, Matrix means, Matrix covariance,
                                           FitReport report) {
  const Index k = means.rows();
  const Index d = means.cols();
  if (k < 1 || d < 1) throw Error(ErrorCode::InvalidModel, "LDA needs at least one class and one dimension");
  if (priors.size() != k) throw Error(ErrorCode::InvalidModel, "LDA prior count differs from class count");
  if (covariance.rows() != d || covariance.cols() != d) {
    throw Error(ErrorCode::InvalidModel, "LDA covariance must be d x d");
  }
  if (!means.allFinite() || !priors.allFinite() || !covariance.allFinite()) {
    throw Error(ErrorCode::InvalidModel, "LDA parameters must be finite");
  }
  if ((priors.array() <= 0.0).any() || std::abs(priors.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidModel, "LDA priors must be positive and sum to one");
  }
  const double scale = covariance.cwiseAbs().maxCoeff();
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::InvalidModel, "LDA covariance is not symmetric");
  }
  GaussianClassifier m;
  m.kind_ = ClassifierKind::Lda;
  m.chol_.compute(covariance);
  if (m.chol_.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidModel, "LDA covariance is not positive definite");
  }
  const Vector diag = m.chol_.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidModel, "LDA covariance is not positive definite");
  }
  const double log_det = 2.0 * diag.array().log().sum();
  m.priors_ = std::move(priors);
  m.log_priors_ = m.priors_.array().log();
  m.means_ = std::move(means);
  m.covariance_ = std::move(covariance);
  m.log_norm_ = -0.5 * (static_cast<double>(d) * kLog2Pi + log_det);
  m.report_ = std::move(report);
  return m;
}

Matrix GaussianClassifier::covariance() const {
  if (kind_ == ClassifierKind::Nmc) return variance_ * Matrix::Identity(dim(), dim());
  return covariance_;
}

double GaussianClassifier::log_density(const Eigen::Ref<const Vector>& x, int k) const {
  const Vector diff = x - means_.row(k).transpose();
  if (kind_ == ClassifierKind::Nmc) return log_norm_ - 0.5 * diff.squaredNorm() / variance_;
  const Vector z = chol_.matrixL().solve(diff);
  return log_norm_ - 0.5 * z.squaredNorm();
}

Vector GaussianClassifier::class_log_joint(const Eigen::Ref<const Vector>& x) const {
  Vector out(num_classes());
  for (int k = 0; k < num_classes(); ++k) out[k] = log_priors_[k] + log_density(x, k);
  return out;
}

double log_joint(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x, int y) {
  check_point(model, x);
  if (y < 0 || y >= model.num_classes()) {
    throw Error(ErrorCode::DimensionMismatch, "class index " + std::to_string(y) + " out of range");
  }
  return model.log_priors()[y] + model.log_density(x, y);
}

double log_marginal(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x) {
  check_point(model, x);
  return log_sum_exp(model.class_log_joint(x));
}

Vector posterior(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x) {
  check_point(model, x);
  const Vector lj = model.class_log_joint(x);
  const Vector shifted = (lj.array() - lj.maxCoeff()).exp();
  return shifted / shifted.sum();
}

int predict(const GaussianClassifier& model, const Eigen::Ref<const Vector>& x) {
  check_point(model, x);
  const Vector lj = model.class_log_joint(x);
  int best = 0;
  for (int k = 1; k < lj.size(); ++k) {
    if (lj[k] > lj[best]) best = k;
  }
  return best;
}

EvalResult evaluate(const GaussianClassifier& model, const Dataset& eval_set) {
  if (eval_set.dim() != model.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "evaluation set '" + eval_set.name + "' has dimension " +
                                                  std::to_string(eval_set.dim()) + ", model expects " +
                                                  std::to_string(model.dim()));
  }
  if (eval_set.size() == 0) throw Error(ErrorCode::EmptyInput, "evaluation set is empty");
  Index errors = 0;
  CompensatedSum joint;
  CompensatedSum marginal;
  for (Index i = 0; i < eval_set.size(); ++i) {
    const int y = eval_set.labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= model.num_classes()) {
      throw Error(ErrorCode::DimensionMismatch, "label " + std::to_string(y) + " outside model classes");
    }
    const Vector lj = model.class_log_joint(eval_set.features.row(i).transpose());
    int best = 0;
    for (int k = 1; k < lj.size(); ++k) {
      if (lj[k] > lj[best]) best = k;
    }
    if (best != y) ++errors;
    joint.add(lj[y]);
    marginal.add(log_sum_exp(lj));
  }
  const auto n = static_cast<double>(eval_set.size());
  EvalResult r;
  r.n_eval = eval_set.size();
  r.error_rate = static_cast<double>(errors) / n;
  r.avg_joint_loglik = joint.value() / n;
  r.avg_marginal_loglik = marginal.value() / n;
  return r;
}

double variance_floor(const FeatureMatrix& features) {
  if (features.size() == 0) return 1e-8;
  const double mean_sq = features.squaredNorm() / static_cast<double>(features.size());
  return 1e-8 * (1.0 + mean_sq);
}

Matrix one_hot(const std::vector<int>& labels, int num_classes) {
  Matrix r = Matrix::Zero(static_cast<Index>(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) r(static_cast<Index>(i), labels[i]) = 1.0;
  return r;
}

GaussianClassifier fit_weighted(ClassifierKind kind, const FeatureMatrix& features,
                                const Matrix& responsibilities) {
  const Index n = features.rows();
  const Index d = features.cols();
  const Index k = responsibilities.cols();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "no objects to fit");
  if (responsibilities.rows() != n || k < 1) {
    throw Error(ErrorCode::DimensionMismatch, "responsibility matrix does not match the sample");
  }
  const Vector weight = responsibilities.colwise().sum().transpose();
  for (Index c = 0; c < k; ++c) {
    if (!(weight[c] > 0.0)) {
      throw Error(ErrorCode::MissingClass, "class " + std::to_string(c) + " has no samples");
    }
  }
  Matrix means(k, d);
  for (Index c = 0; c < k; ++c) {
    means.row(c) = (responsibilities.col(c).transpose() * features) / weight[c];
  }
  const double total = weight.sum();

  FitReport report;
  report.estimator = "maximum-likelihood";
  if (kind == ClassifierKind::Nmc) {
    CompensatedSum sse;
    for (Index c = 0; c < k; ++c) {
      for (Index i = 0; i < n; ++i) {
        const double r = responsibilities(i, c);
        if (r == 0.0) continue;
        sse.add(r * (features.row(i) - means.row(c)).squaredNorm());
      }
    }
    double variance = sse.value() / (total * static_cast<double>(d));
    const double floor = variance_floor(features);
    if (!(variance >= floor)) {
      variance = floor;
      report.variance_clamped = true;
    }
    return GaussianClassifier::nmc(std::move(means), variance, std::move(report));
  }

  Matrix within = Matrix::Zero(d, d);
  for (Index c = 0; c < k; ++c) {
    const Matrix centered = features.rowwise() - means.row(c);
    within.noalias() += centered.transpose() * responsibilities.col(c).asDiagonal() * centered;
  }
  within /= total;
  within = 0.5 * (within + within.transpose()).eval();

  const double mean_eig = within.trace() / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(within, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(mean_eig > 0.0)) {
    report.ridge_applied = true;
    report.ridge = variance_floor(features);
  } else if (smallest < kRidgeTrigger * mean_eig) {
    report.ridge_applied = true;
    report.ridge = kRidgeSize * mean_eig;
  }
  if (report.ridge_applied) within.diagonal().array() += report.ridge;

  Vector priors = weight / total;
  return GaussianClassifier::lda(std::move(priors), std::move(means), std::move(within), std::move(report));
}

namespace {

void require_classes(const Dataset& labeled, Index min_per_class) {
  check_dataset(labeled, false);
  const auto counts = class_counts(labeled);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::MissingClass, "labeled sample has no objects of class " + std::to_string(c));
    }
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < min_per_class) {
      throw Error(ErrorCode::TooFewPerClass, "class " + std::to_string(c) + " has " +
                                                 std::to_string(counts[c]) + " labeled objects, need " +
                                                 std::to_string(min_per_class));
    }
  }
}

}  // namespace

namespace {

GaussianClassifier fit_labeled(ClassifierKind kind, const Dataset& labeled) {
  auto model = fit_weighted(kind, labeled.features, one_hot(labeled.labels, labeled.num_classes));
  FitReport report = model.report();
  report.estimator = "supervised";
  return model.with_report(std::move(report));
}

}  // namespace

GaussianClassifier fit_nmc_supervised(const Dataset& labeled) {
  require_classes(labeled, 1);
  return fit_labeled(ClassifierKind::Nmc, labeled);
}

GaussianClassifier fit_lda_supervised(const Dataset& labeled) {
  require_classes(labeled, 2);
  return fit_labeled(ClassifierKind::Lda, labeled);
}

GaussianClassifier fit_supervised(ClassifierKind kind, const Dataset& labeled) {
  return kind == ClassifierKind::Nmc ? fit_nmc_supervised(labeled) : fit_lda_supervised(labeled);
}

}  // namespace semisup
