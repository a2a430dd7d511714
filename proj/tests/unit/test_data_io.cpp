#include "doctest.h"
#include "temp_dir.hpp"

#include "semisup/data_io.hpp"
#include "semisup/error.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <sstream>

using namespace semisup;
using testing_support::TempDir;

namespace {

const std::filesystem::path kData = SEMISUP_TEST_DATA_DIR;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

double smallest_prior(const Dataset& d) {
  const auto c = class_counts(d);
  return static_cast<double>(*std::min_element(c.begin(), c.end())) / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("registry mirrors the eight bundled data sets") {
  const auto reg = dataset_registry();
  REQUIRE(reg.size() == 8);
  struct Row { const char* name; Index n; Index d; double p; };
  const Row expected[] = {{"haberman", 306, 3, 0.26}, {"ionosphere", 351, 33, 0.36}, {"pima", 768, 8, 0.35},
                          {"sonar", 208, 60, 0.47},   {"spect", 267, 22, 0.21},      {"spectf", 267, 44, 0.21},
                          {"transfusion", 748, 3, 0.24}, {"wdbc", 569, 30, 0.37}};
  for (const auto& row : expected) {
    const DatasetSpec* spec = find_dataset_spec(row.name);
    REQUIRE(spec != nullptr);
    CHECK(spec->expected_objects == row.n);
    CHECK(spec->expected_dims == row.d);
    CHECK(spec->expected_smallest_prior == row.p);
  }
  CHECK(find_dataset_spec("iris") == nullptr);
}

TEST_CASE("bundled haberman and sonar load with their expected shape") {
  const auto h = load_dataset(kData / "haberman.csv", *find_dataset_spec("haberman"));
  CHECK(h.size() == 306);
  CHECK(h.dim() == 3);
  CHECK(std::abs(smallest_prior(h) - 0.26) <= 0.005);
  const auto s = load_dataset(kData / "sonar.csv", *find_dataset_spec("sonar"));
  CHECK(s.size() == 208);
  CHECK(s.dim() == 60);
  CHECK(std::abs(smallest_prior(s) - 0.47) <= 0.005);
  CHECK(class_counts(s)[0] >= class_counts(s)[1]);
}

TEST_CASE("a dropped column is a shape mismatch naming both dimensions") {
  TempDir dir("dropcol");
  std::istringstream in(testing_support::read_file(kData / "haberman.csv"));
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(line.find(',') + 1) << '\n';
  testing_support::write_file(dir / "haberman.csv", out.str());
  try {
    load_dataset(dir / "haberman.csv", *find_dataset_spec("haberman"));
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
    CHECK(std::string(e.what()).find("expected d = 3, found d = 2") != std::string::npos);
  }
}

TEST_CASE("a truncated file reports the expected object count") {
  TempDir dir("trunc");
  std::istringstream in(testing_support::read_file(kData / "pima.csv"));
  std::ostringstream out;
  std::string line;
  for (int i = 0; i < 700 && std::getline(in, line); ++i) out << line << '\n';
  testing_support::write_file(dir / "pima.csv", out.str());
  try {
    load_dataset(dir / "pima.csv", *find_dataset_spec("pima"));
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
    CHECK(std::string(e.what()).find("expected 768 objects, found 700") != std::string::npos);
  }
}

TEST_CASE("prior mismatch") {
  TempDir dir("prior");
  std::ostringstream out;
  for (int i = 0; i < 306; ++i) out << i << ",1,2," << (i % 2) << '\n';
  testing_support::write_file(dir / "haberman.csv", out.str());
  CHECK(code_of([&] { load_dataset(dir / "haberman.csv", *find_dataset_spec("haberman")); }) ==
        ErrorCode::PriorMismatch);
}

TEST_CASE("csv parsing errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_canonical_csv(in, "t");
  };
  CHECK(code_of([&] { parse("1,2,0\n1,x,1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse("1,2,0\n1,1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { parse("1,2,0\n1,3,1\n4,4,2\n"); }) == ErrorCode::NotTwoClass);
  CHECK(code_of([&] { parse("1,2,0\n1,3,0\n"); }) == ErrorCode::NotTwoClass);
  CHECK(code_of([&] { parse(""); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { read_canonical_csv(std::filesystem::path("/nonexistent/x.csv"), "x"); }) == ErrorCode::Io);
}

TEST_CASE("label mapping puts the majority at zero") {
  std::istringstream in("1,b\n2,a\n3,a\r\n4,a\n");
  const auto d = read_canonical_csv(in, "t");
  CHECK(d.labels == std::vector<int>{1, 0, 0, 0});
  CHECK(d.features(3, 0) == 4.0);

  std::istringstream tie("1,1\n2,0\n");
  CHECK(read_canonical_csv(tie, "t").labels == std::vector<int>{1, 0});
  std::istringstream tie_plain("1,x\n2,y\n");
  CHECK(read_canonical_csv(tie_plain, "t").labels == std::vector<int>{0, 1});
}

TEST_CASE("canonical csv round-trips bit-exactly") {
  for (const char* name : {"wdbc", "ionosphere", "spectf"}) {
    const auto a = load_dataset(kData / (std::string(name) + ".csv"), *find_dataset_spec(name));
    std::ostringstream out;
    write_canonical_csv(out, a);
    std::istringstream in(out.str());
    const auto b = read_canonical_csv(in, name);
    CHECK((a.features.array() == b.features.array()).all());
    CHECK(a.labels == b.labels);
  }
}

TEST_CASE("synthetic generator") {
  SyntheticSpec spec;
  spec.mean_separation = Vector::Zero(2);
  spec.mean_separation[0] = 1.0;
  spec.n = 1000000;
  spec.seed = 42;
  const auto big = generate_synthetic(spec);
  const double frac0 = static_cast<double>(class_counts(big.data)[0]) / 1e6;
  CHECK(std::abs(frac0 - 0.5) <= 0.002);
  CHECK(big.truth.kind() == ClassifierKind::Nmc);
  CHECK(big.truth.class_mean(1)[0] == 1.0);
  CHECK(big.truth.variance() == 1.0);

  spec.n = 100;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  CHECK((a.data.features.array() == b.data.features.array()).all());
  CHECK(a.data.labels == b.data.labels);

  spec.priors = Vector(2);
  spec.priors << 0.8, 0.2;
  CHECK(generate_synthetic(spec).truth.kind() == ClassifierKind::Lda);

  SyntheticSpec bad = spec;
  bad.n = 0;
  CHECK(code_of([&] { generate_synthetic(bad); }) == ErrorCode::InvalidSpec);
  bad = spec;
  bad.sigma = 0.0;
  CHECK(code_of([&] { generate_synthetic(bad); }) == ErrorCode::InvalidSpec);
  bad = spec;
  bad.priors << 0.7, 0.7;
  CHECK(code_of([&] { generate_synthetic(bad); }) == ErrorCode::InvalidSpec);
}
