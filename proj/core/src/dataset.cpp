#include "semisup/dataset.hpp"

#include "semisup/error.hpp"

#include <string>

namespace semisup {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::TooFewPerClass: return "TooFewPerClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::PriorMismatch: return "PriorMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotTwoClass: return "NotTwoClass";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::RedrawLimitExceeded: return "RedrawLimitExceeded";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::MalformedCsv: return "MalformedCSV";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::vector<Index> class_counts(const Dataset& data) {
  std::vector<Index> counts(static_cast<std::size_t>(data.num_classes), 0);
  for (int y : data.labels) {
    if (y >= 0 && y < data.num_classes) ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

void check_dataset(const Dataset& data, bool require_all_classes) {
  if (data.num_classes < 1) throw Error(ErrorCode::InvalidSpec, "dataset needs at least one class");
  if (data.size() < 1 || data.dim() < 1) {
    throw Error(ErrorCode::InvalidSpec, "dataset '" + data.name + "' is empty");
  }
  if (static_cast<Index>(data.labels.size()) != data.size()) {
    throw Error(ErrorCode::InvalidSpec, "dataset '" + data.name + "' has " +
                                            std::to_string(data.labels.size()) + " labels for " +
                                            std::to_string(data.size()) + " objects");
  }
  for (int y : data.labels) {
    if (y < 0 || y >= data.num_classes) {
      throw Error(ErrorCode::InvalidSpec, "label " + std::to_string(y) + " out of range");
    }
  }
  if (!data.features.allFinite()) {
    throw Error(ErrorCode::InvalidSpec, "dataset '" + data.name + "' has non-finite features");
  }
  if (require_all_classes) {
    const auto counts = class_counts(data);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) {
        throw Error(ErrorCode::MissingClass,
                    "dataset '" + data.name + "' has no objects of class " + std::to_string(k));
      }
    }
  }
}

Dataset take_rows(const Dataset& data, const std::vector<Index>& indices) {
  Dataset out;
  out.name = data.name;
  out.num_classes = data.num_classes;
  out.features = take_feature_rows(data.features, indices);
  out.labels.reserve(indices.size());
  for (Index i : indices) out.labels.push_back(data.labels[static_cast<std::size_t>(i)]);
  return out;
}

FeatureMatrix take_feature_rows(const FeatureMatrix& features, const std::vector<Index>& indices) {
  FeatureMatrix out(static_cast<Index>(indices.size()), features.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.row(static_cast<Index>(r)) = features.row(indices[r]);
  }
  return out;
}

FeatureMatrix stack_rows(const FeatureMatrix& top, const FeatureMatrix& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "cannot stack " + std::to_string(top.cols()) +
                                                  "-dim and " + std::to_string(bottom.cols()) +
                                                  "-dim feature sets");
  }
  FeatureMatrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace semisup
