#include "semisup/semi_supervised.hpp"

#include "semisup/compensated_sum.hpp"
#include "semisup/error.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace semisup {

namespace {

constexpr double kPsdFloor = 1e-6;

GaussianClassifier rebuild(const GaussianClassifier& model, Matrix means, FitReport report) {
  if (model.kind() == ClassifierKind::Nmc) {
    return GaussianClassifier::nmc(std::move(means), model.variance(), std::move(report));
  }
  return GaussianClassifier::lda(model.priors(), std::move(means), model.covariance(), std::move(report));
}

void check_unlabeled(const Dataset& labeled, const FeatureMatrix& unlabeled) {
  if (unlabeled.rows() > 0 && unlabeled.cols() != labeled.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "unlabeled features have dimension " +
                                                  std::to_string(unlabeled.cols()) + ", labeled have " +
                                                  std::to_string(labeled.dim()));
  }
}

std::vector<int> concat_labels(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

GaussianClassifier tag(const GaussianClassifier& model, const char* estimator) {
  FitReport report = model.report();
  report.estimator = estimator;
  return model.with_report(std::move(report));
}

}  // namespace

GaussianClassifier apply_mean_constraint(const GaussianClassifier& model, const Vector& weights,
                                         const Vector& overall_mean) {
  if (weights.size() != model.num_classes() || overall_mean.size() != model.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "constraint weights or mean do not match the model");
  }
  const Vector weighted = model.means().transpose() * weights;
  const Vector offset = overall_mean - weighted;
  Matrix shifted = model.means().rowwise() + offset.transpose();
  return rebuild(model, std::move(shifted), model.report());
}

Vector labeled_class_weights(const Dataset& labeled) {
  const auto counts = class_counts(labeled);
  Vector w(labeled.num_classes);
  for (int k = 0; k < labeled.num_classes; ++k) {
    w[k] = static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(labeled.size());
  }
  return w;
}

GaussianClassifier fit_nmc_constrained(const Dataset& labeled, const FeatureMatrix& unlabeled) {
  const GaussianClassifier supervised = fit_nmc_supervised(labeled);
  check_unlabeled(labeled, unlabeled);
  const MomentStats moments = compute_moments(labeled.features, unlabeled);
  FitReport report = supervised.report();
  report.estimator = "constrained: mean shift, supervised variance";
  return apply_mean_constraint(supervised.with_report(report), labeled_class_weights(labeled), moments.mean);
}

GaussianClassifier fit_lda_constrained(const Dataset& labeled, const FeatureMatrix& unlabeled) {
  const GaussianClassifier supervised = fit_lda_supervised(labeled);
  check_unlabeled(labeled, unlabeled);
  const MomentStats moments = compute_moments(labeled.features, unlabeled);
  const Vector& priors = supervised.priors();
  const GaussianClassifier shifted = apply_mean_constraint(supervised, priors, moments.mean);

  const Matrix between = between_class_scatter(shifted.means(), priors, moments.mean);
  Matrix within = moments.total_covariance - between;

  FitReport report;
  report.estimator = "constrained: mean shift, within = total - between";
  const Index d = within.rows();
  double floor = kPsdFloor * moments.total_covariance.trace() / static_cast<double>(d);
  if (!(floor > 0.0)) floor = variance_floor(stack_rows(labeled.features, unlabeled));

  Eigen::SelfAdjointEigenSolver<Matrix> eig(within);
  Vector values = eig.eigenvalues();
  for (Index i = 0; i < values.size(); ++i) {
    if (!(values[i] >= floor)) {
      values[i] = floor;
      ++report.eigenvalues_clamped;
    }
  }
  if (report.eigenvalues_clamped > 0) {
    report.psd_repaired = true;
    const Matrix& vecs = eig.eigenvectors();
    within = vecs * values.asDiagonal() * vecs.transpose();
    within = 0.5 * (within + within.transpose()).eval();
  }
  return GaussianClassifier::lda(priors, shifted.means(), std::move(within), std::move(report));
}

GaussianClassifier fit_constrained(ClassifierKind kind, const Dataset& labeled, const FeatureMatrix& unlabeled) {
  return kind == ClassifierKind::Nmc ? fit_nmc_constrained(labeled, unlabeled)
                                     : fit_lda_constrained(labeled, unlabeled);
}

double mean_constraint_residual(const GaussianClassifier& model, const Vector& weights,
                                const Vector& overall_mean) {
  const Vector weighted = model.means().transpose() * weights;
  return (overall_mean - weighted).norm() / (1.0 + overall_mean.norm());
}

double scatter_constraint_residual(const GaussianClassifier& model, const MomentStats& moments) {
  const Matrix between = between_class_scatter(model.means(), model.priors(), moments.mean);
  const Matrix gap = between + model.covariance() - moments.total_covariance;
  return gap.cwiseAbs().maxCoeff() / (1.0 + moments.total_covariance.cwiseAbs().maxCoeff());
}

double complete_data_objective(const GaussianClassifier& model, const Dataset& labeled,
                               const FeatureMatrix& unlabeled, const std::vector<int>& pseudo_labels) {
  CompensatedSum sum;
  for (Index i = 0; i < labeled.size(); ++i) {
    sum.add(log_joint(model, labeled.features.row(i).transpose(), labeled.labels[static_cast<std::size_t>(i)]));
  }
  for (Index i = 0; i < unlabeled.rows(); ++i) {
    sum.add(log_joint(model, unlabeled.row(i).transpose(), pseudo_labels[static_cast<std::size_t>(i)]));
  }
  return sum.value() / static_cast<double>(labeled.size() + unlabeled.rows());
}

SelfLearnResult fit_self_learned(ClassifierKind kind, const Dataset& labeled, const FeatureMatrix& unlabeled,
                                 int max_iter) {
  if (max_iter < 1) throw Error(ErrorCode::InvalidSpec, "max_iter must be at least 1");
  GaussianClassifier model = fit_supervised(kind, labeled);
  check_unlabeled(labeled, unlabeled);

  SelfLearnResult result{tag(model, "self-learned"), {}, {}};
  if (unlabeled.rows() == 0) {
    result.trace.iterations = 1;
    result.trace.converged = true;
    result.trace.objective_per_iter.push_back(complete_data_objective(model, labeled, unlabeled, {}));
    result.trace.label_changes_per_iter.push_back(0);
    return result;
  }

  const FeatureMatrix pooled = stack_rows(labeled.features, unlabeled);
  std::vector<int> pseudo(static_cast<std::size_t>(unlabeled.rows()), -1);
  for (int it = 1; it <= max_iter; ++it) {
    Index changes = 0;
    for (Index i = 0; i < unlabeled.rows(); ++i) {
      const int y = predict(model, unlabeled.row(i).transpose());
      if (y != pseudo[static_cast<std::size_t>(i)]) ++changes;
      pseudo[static_cast<std::size_t>(i)] = y;
    }
    model = fit_weighted(kind, pooled, one_hot(concat_labels(labeled.labels, pseudo), labeled.num_classes));
    result.trace.iterations = it;
    result.trace.label_changes_per_iter.push_back(changes);
    result.trace.objective_per_iter.push_back(complete_data_objective(model, labeled, unlabeled, pseudo));
    if (it > 1 && changes == 0) {
      result.trace.converged = true;
      break;
    }
  }
  result.model = tag(model, "self-learned");
  result.pseudo_labels = std::move(pseudo);
  return result;
}

double semi_supervised_objective(const GaussianClassifier& model, const Dataset& labeled,
                                 const FeatureMatrix& unlabeled) {
  CompensatedSum sum;
  for (Index i = 0; i < labeled.size(); ++i) {
    sum.add(log_joint(model, labeled.features.row(i).transpose(), labeled.labels[static_cast<std::size_t>(i)]));
  }
  for (Index i = 0; i < unlabeled.rows(); ++i) sum.add(log_marginal(model, unlabeled.row(i).transpose()));
  return sum.value();
}

EmResult fit_em_soft(ClassifierKind kind, const Dataset& labeled, const FeatureMatrix& unlabeled, int max_iter,
                     double tol) {
  if (max_iter < 1) throw Error(ErrorCode::InvalidSpec, "max_iter must be at least 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidSpec, "EM tolerance must be positive");
  GaussianClassifier model = fit_supervised(kind, labeled);
  check_unlabeled(labeled, unlabeled);

  EmResult result{model, {}};
  double previous = semi_supervised_objective(model, labeled, unlabeled);
  result.trace.objective_per_iter.push_back(previous);

  const FeatureMatrix pooled = stack_rows(labeled.features, unlabeled);
  Matrix resp = Matrix::Zero(pooled.rows(), labeled.num_classes);
  resp.topRows(labeled.size()) = one_hot(labeled.labels, labeled.num_classes);
  for (int it = 1; it <= max_iter; ++it) {
    for (Index i = 0; i < unlabeled.rows(); ++i) {
      resp.row(labeled.size() + i) = posterior(model, unlabeled.row(i).transpose()).transpose();
    }
    model = fit_weighted(kind, pooled, resp);
    const double current = semi_supervised_objective(model, labeled, unlabeled);
    result.trace.iterations = it;
    result.trace.objective_per_iter.push_back(current);
    const double gain = current - previous;
    previous = current;
    if (gain < tol) {
      result.trace.converged = true;
      break;
    }
  }
  result.model = tag(model, unlabeled.rows() == 0 ? "supervised" : "soft EM");
  return result;
}

}  // namespace semisup
