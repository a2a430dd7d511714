#pragma once

#include "semisup/dataset.hpp"
#include "semisup/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace semisup {

/// Expected shape of one bundled two-class data set.
struct DatasetSpec {
  std::string name;
  Index expected_objects = 0;
  Index expected_dims = 0;
  double expected_smallest_prior = 0.0;  // rounded to two decimals
  std::string positive_label_token = "1";
};

inline constexpr double kPriorTolerance = 0.005;

/// The eight bundled data sets, in alphabetical order.
std::span<const DatasetSpec> dataset_registry();

/// Registry lookup; nullptr when `name` is not registered.
const DatasetSpec* find_dataset_spec(std::string_view name);

/// Read a canonical CSV: no header, d numeric columns then a label column.
/// Two label tokens are mapped to 0 (majority) and 1 (minority); on a count
/// tie `positive_token` (if it occurs) becomes 1, otherwise the token seen
/// first becomes 0. LF and CRLF line ends are accepted.
///
/// Throws ParseError (non-numeric cell, ragged row), NotTwoClass, Io.
Dataset read_canonical_csv(std::istream& in, std::string name, std::string_view positive_token = "1");
Dataset read_canonical_csv(const std::filesystem::path& path, std::string name,
                           std::string_view positive_token = "1");

/// Load `path` and validate it against `spec`: object count and dimension
/// (ShapeMismatch) and smallest class prior within 0.005 (PriorMismatch).
Dataset load_dataset(const std::filesystem::path& path, const DatasetSpec& spec);

/// Write features with 17 significant digits followed by the integer label.
void write_canonical_csv(std::ostream& out, const Dataset& data);
void write_canonical_csv(const std::filesystem::path& path, const Dataset& data);

/// Two-component spherical Gaussian mixture. Class 0 is centred at
/// -mean_separation, class 1 at +mean_separation.
struct SyntheticSpec {
  Vector mean_separation;
  double sigma = 1.0;
  Vector priors = Vector::Constant(2, 0.5);
  Index n = 0;
  std::uint64_t seed = 0;
};

struct SyntheticDraw {
  Dataset data;
  GaussianClassifier truth;
};

/// Draw `spec.n` labeled points. The generating parameters are returned as an
/// NMC model when the priors are equal and as an LDA model otherwise.
/// Throws InvalidSpec for n = 0, sigma <= 0 or an invalid prior vector.
SyntheticDraw generate_synthetic(const SyntheticSpec& spec);

}  // namespace semisup
