#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace semisup {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Objects are stored one per row; row-major keeps each object contiguous so
/// `X.row(i).transpose()` binds to `Eigen::Ref<const Vector>` without a copy.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A labeled sample: N objects of dimension d with labels in {0..K-1}.
///
/// The same type serves as the full empirical distribution (a loaded data
/// set) and as a drawn labeled training sample. Only the former is required
/// to contain every class; fitting routines check class presence themselves.
struct Dataset {
  std::string name;
  FeatureMatrix features;
  std::vector<int> labels;
  int num_classes = 2;

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
};

/// Per-class object counts, length `num_classes`.
std::vector<Index> class_counts(const Dataset& data);

/// Throws InvalidSpec unless shapes agree, labels are in range and every
/// feature is finite. With `require_all_classes` every class must occur.
void check_dataset(const Dataset& data, bool require_all_classes);

/// Rows `indices` of `data` (with repetition allowed), keeping K and name.
Dataset take_rows(const Dataset& data, const std::vector<Index>& indices);

/// Feature rows `indices` of `features`.
FeatureMatrix take_feature_rows(const FeatureMatrix& features, const std::vector<Index>& indices);

/// `top` rows followed by `bottom` rows; column counts must agree.
FeatureMatrix stack_rows(const FeatureMatrix& top, const FeatureMatrix& bottom);

}  // namespace semisup
