#include "semisup/moments.hpp"

#include "semisup/error.hpp"

#include <string>

namespace semisup {

namespace {

Matrix symmetric(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

MomentStats compute_moments(const FeatureMatrix& labeled, const FeatureMatrix& unlabeled) {
  const Index n = labeled.rows() + unlabeled.rows();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "no feature vectors to pool");
  if (labeled.rows() > 0 && unlabeled.rows() > 0 && labeled.cols() != unlabeled.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "labeled and unlabeled dimensions differ");
  }
  const Index d = labeled.rows() > 0 ? labeled.cols() : unlabeled.cols();

  Vector sum = Vector::Zero(d);
  if (labeled.rows() > 0) sum += labeled.colwise().sum().transpose();
  if (unlabeled.rows() > 0) sum += unlabeled.colwise().sum().transpose();

  MomentStats stats;
  stats.count = n;
  stats.mean = sum / static_cast<double>(n);

  Matrix scatter = Matrix::Zero(d, d);
  for (const FeatureMatrix* part : {&labeled, &unlabeled}) {
    if (part->rows() == 0) continue;
    const Matrix centered = part->rowwise() - stats.mean.transpose();
    scatter.noalias() += centered.transpose() * centered;
  }
  stats.total_covariance = symmetric(scatter / static_cast<double>(n));
  return stats;
}

Matrix between_class_scatter(const Matrix& class_means, const Vector& weights, const Vector& center) {
  const Index d = class_means.cols();
  Matrix b = Matrix::Zero(d, d);
  for (Index k = 0; k < class_means.rows(); ++k) {
    const Vector offset = class_means.row(k).transpose() - center;
    b.noalias() += weights[k] * offset * offset.transpose();
  }
  return symmetric(b);
}

ScatterDecomposition decompose_scatter(const Dataset& labeled) {
  check_dataset(labeled, false);
  const auto counts = class_counts(labeled);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorCode::MissingClass, "labeled sample has no objects of class " + std::to_string(k));
    }
  }
  const Index n = labeled.size();
  const Index d = labeled.dim();
  const int num_classes = labeled.num_classes;

  Matrix means = Matrix::Zero(num_classes, d);
  for (Index i = 0; i < n; ++i) means.row(labeled.labels[static_cast<std::size_t>(i)]) += labeled.features.row(i);
  Vector weights(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    means.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    weights[k] = static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(n);
  }
  const Vector overall = labeled.features.colwise().mean().transpose();

  Matrix within = Matrix::Zero(d, d);
  Matrix total = Matrix::Zero(d, d);
  for (Index i = 0; i < n; ++i) {
    const Vector x = labeled.features.row(i).transpose();
    const Vector r = x - means.row(labeled.labels[static_cast<std::size_t>(i)]).transpose();
    const Vector t = x - overall;
    within.noalias() += r * r.transpose();
    total.noalias() += t * t.transpose();
  }

  ScatterDecomposition out;
  out.within = symmetric(within / static_cast<double>(n));
  out.total = symmetric(total / static_cast<double>(n));
  out.between = between_class_scatter(means, weights, overall);
  return out;
}

}  // namespace semisup
