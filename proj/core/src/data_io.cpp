#include "semisup/data_io.hpp"

#include "semisup/error.hpp"
#include "semisup/number_format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace semisup {

namespace {

// Objects, dimensions and smallest prior of the eight UCI sets.
const std::array<DatasetSpec, 8> kRegistry = {{
    {"haberman", 306, 3, 0.26, "1"},
    {"ionosphere", 351, 33, 0.36, "1"},
    {"pima", 768, 8, 0.35, "1"},
    {"sonar", 208, 60, 0.47, "1"},
    {"spect", 267, 22, 0.21, "1"},
    {"spectf", 267, 44, 0.21, "1"},
    {"transfusion", 748, 3, 0.24, "1"},
    {"wdbc", 569, 30, 0.37, "1"},
}};

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::span<const DatasetSpec> dataset_registry() { return kRegistry; }

const DatasetSpec* find_dataset_spec(std::string_view name) {
  for (const auto& spec : kRegistry) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

Dataset read_canonical_csv(std::istream& in, std::string name, std::string_view positive_token) {
  std::vector<double> values;
  std::vector<std::string> tokens;
  std::size_t columns = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (columns == 0) {
      if (cells.size() < 2) {
        throw Error(ErrorCode::ParseError, name + " line " + std::to_string(line_no) +
                                               ": need at least one feature and a label");
      }
      columns = cells.size();
    } else if (cells.size() != columns) {
      throw Error(ErrorCode::ParseError, name + " line " + std::to_string(line_no) + ": found " +
                                             std::to_string(cells.size()) + " columns, expected " +
                                             std::to_string(columns));
    }
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::ParseError, name + " line " + std::to_string(line_no) + " column " +
                                               std::to_string(c + 1) + ": non-numeric feature '" +
                                               std::string(cells[c]) + "'");
      }
      values.push_back(*v);
    }
    tokens.emplace_back(cells.back());
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read error in " + name);
  if (tokens.empty()) throw Error(ErrorCode::ParseError, name + ": no data rows");

  std::vector<std::string> distinct;
  std::vector<Index> counts;
  for (const auto& t : tokens) {
    const auto it = std::find(distinct.begin(), distinct.end(), t);
    if (it == distinct.end()) {
      distinct.push_back(t);
      counts.push_back(1);
    } else {
      ++counts[static_cast<std::size_t>(it - distinct.begin())];
    }
  }
  if (distinct.size() != 2) {
    throw Error(ErrorCode::NotTwoClass, name + ": found " + std::to_string(distinct.size()) +
                                            " distinct labels, expected 2");
  }
  // Index into `distinct` of the token that becomes class 0.
  std::size_t majority = counts[0] >= counts[1] ? 0 : 1;
  if (counts[0] == counts[1] && distinct[0] == positive_token) majority = 1;

  Dataset data;
  data.name = std::move(name);
  data.num_classes = 2;
  const auto n = static_cast<Index>(tokens.size());
  const auto d = static_cast<Index>(columns - 1);
  data.features = Eigen::Map<const FeatureMatrix>(values.data(), n, d);
  data.labels.reserve(tokens.size());
  for (const auto& t : tokens) data.labels.push_back(t == distinct[majority] ? 0 : 1);
  return data;
}

Dataset read_canonical_csv(const std::filesystem::path& path, std::string name, std::string_view positive_token) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for dataset " + name);
  return read_canonical_csv(in, std::move(name), positive_token);
}

Dataset load_dataset(const std::filesystem::path& path, const DatasetSpec& spec) {
  Dataset data = read_canonical_csv(path, spec.name, spec.positive_label_token);
  if (data.size() != spec.expected_objects) {
    throw Error(ErrorCode::ShapeMismatch, spec.name + ": expected " + std::to_string(spec.expected_objects) +
                                              " objects, found " + std::to_string(data.size()));
  }
  if (data.dim() != spec.expected_dims) {
    throw Error(ErrorCode::ShapeMismatch, spec.name + ": expected d = " + std::to_string(spec.expected_dims) +
                                              ", found d = " + std::to_string(data.dim()));
  }
  const auto counts = class_counts(data);
  const double smallest =
      static_cast<double>(*std::min_element(counts.begin(), counts.end())) / static_cast<double>(data.size());
  if (std::abs(smallest - spec.expected_smallest_prior) > kPriorTolerance) {
    std::ostringstream msg;
    msg << spec.name << ": smallest prior " << std::setprecision(4) << smallest << " differs from expected "
        << spec.expected_smallest_prior << " by more than " << kPriorTolerance;
    throw Error(ErrorCode::PriorMismatch, msg.str());
  }
  check_dataset(data, true);
  return data;
}

void write_canonical_csv(std::ostream& out, const Dataset& data) {
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) out << format_double(data.features(i, j)) << ',';
    out << data.labels[static_cast<std::size_t>(i)] << '\n';
  }
}

void write_canonical_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_canonical_csv(out, data);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

SyntheticDraw generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n <= 0) throw Error(ErrorCode::InvalidSpec, "synthetic sample size must be positive");
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorCode::InvalidSpec, "synthetic sigma must be positive");
  }
  if (spec.mean_separation.size() < 1 || !spec.mean_separation.allFinite()) {
    throw Error(ErrorCode::InvalidSpec, "synthetic mean separation must be a finite vector");
  }
  if (spec.priors.size() != 2 || (spec.priors.array() <= 0.0).any() || std::abs(spec.priors.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidSpec, "synthetic priors must be two positive values summing to one");
  }
  const Index d = spec.mean_separation.size();
  Matrix means(2, d);
  means.row(0) = -spec.mean_separation.transpose();
  means.row(1) = spec.mean_separation.transpose();

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  Dataset data;
  data.name = "synthetic";
  data.num_classes = 2;
  data.features.resize(spec.n, d);
  data.labels.resize(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) {
    const int y = unit(rng) < spec.priors[0] ? 0 : 1;
    data.labels[static_cast<std::size_t>(i)] = y;
    for (Index j = 0; j < d; ++j) data.features(i, j) = means(y, j) + spec.sigma * noise(rng);
  }

  const double variance = spec.sigma * spec.sigma;
  FitReport report;
  report.estimator = "generating model";
  if (spec.priors[0] == spec.priors[1]) {
    return {std::move(data), GaussianClassifier::nmc(std::move(means), variance, std::move(report))};
  }
  Matrix cov = variance * Matrix::Identity(d, d);
  return {std::move(data), GaussianClassifier::lda(spec.priors, std::move(means), std::move(cov), std::move(report))};
}

}  // namespace semisup
