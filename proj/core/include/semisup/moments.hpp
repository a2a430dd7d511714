#pragma once

#include "semisup/dataset.hpp"

namespace semisup {

/// Label-independent statistics of labeled and unlabeled features pooled.
struct MomentStats {
  Vector mean;             // overall sample mean
  Matrix total_covariance; // ML (divide-by-N) covariance about `mean`
  Index count = 0;
};

/// Between/within/total covariance of a fully labeled sample. On the same
/// sample `between + within == total` up to rounding.
struct ScatterDecomposition {
  Matrix between;
  Matrix within;
  Matrix total;
};

/// Pooled mean and ML covariance over `labeled` and `unlabeled` rows, labels
/// ignored. Either set may be empty, not both (EmptyInput).
MomentStats compute_moments(const FeatureMatrix& labeled, const FeatureMatrix& unlabeled);

/// W = sum_k (N_k/N) C_k, B = sum_k (N_k/N)(m_k - m)(m_k - m)^T and T about
/// the labeled mean. Throws MissingClass if any class is absent.
ScatterDecomposition decompose_scatter(const Dataset& labeled);

/// sum_k w_k (m_k - center)(m_k - center)^T for class means stored as rows.
Matrix between_class_scatter(const Matrix& class_means, const Vector& weights, const Vector& center);

}  // namespace semisup
