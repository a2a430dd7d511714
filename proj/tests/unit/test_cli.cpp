#include "doctest.h"
#include "temp_dir.hpp"

#include "semisup/cli.hpp"
#include "semisup/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <vector>

using namespace semisup;
using testing_support::TempDir;

namespace {

const std::filesystem::path kData = SEMISUP_TEST_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "semisup");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

void write_config(const std::filesystem::path& path, const std::filesystem::path& data_dir, int workers = 1) {
  testing_support::write_file(path, "data_dir = " + data_dir.string() +
                                        "\n"
                                        "datasets = haberman\n"
                                        "methods = supervised:nmc, self_learned:nmc, constrained:nmc\n"
                                        "labeled_sizes_nmc = 4\n"
                                        "unlabeled_sizes = 2, 8, 32\n"
                                        "repetitions = 15\n"
                                        "workers = " + std::to_string(workers) + "\n");
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"run", "--config", "x.cfg"}).code == kExitUsage);
  CHECK(cli({"plot", "--cells", "c.csv", "--out", "o"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("run writes cells files and is reproducible") {
  TempDir dir("clirun");
  write_config(dir / "run.cfg", kData);
  const auto a = cli({"run", "--config", (dir / "run.cfg").string(), "--out", (dir / "a").string(), "--audit"});
  REQUIRE(a.code == kExitOk);
  const std::string csv = testing_support::read_file(dir / "a" / "cells.csv");
  CHECK(csv.substr(0, cells_csv_header().size()) == cells_csv_header());
  CHECK(count(csv, "\n") == 1 + 9);
  CHECK(std::filesystem::exists(dir / "a" / "cells.json"));
  const std::string audit = testing_support::read_file(dir / "a" / "audit.csv");
  CHECK(count(audit, "\n") == 1 + 9 * 15);

  write_config(dir / "run4.cfg", kData, 4);
  const auto b = cli({"run", "--config", (dir / "run4.cfg").string(), "--out", (dir / "b").string()});
  REQUIRE(b.code == kExitOk);
  CHECK(testing_support::read_file(dir / "b" / "cells.csv") == csv);
  CHECK_FALSE(std::filesystem::exists(dir / "b" / "audit.csv"));
}

TEST_CASE("run reports a missing data set with its path") {
  TempDir dir("climissing");
  write_config(dir / "run.cfg", dir / "nodata");
  const auto r = cli({"run", "--config", (dir / "run.cfg").string(), "--out", (dir / "o").string()});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("haberman") != std::string::npos);
  CHECK(r.err.find((dir / "nodata").string()) != std::string::npos);
}

TEST_CASE("plot from a run and plot errors") {
  TempDir dir("cliplot");
  write_config(dir / "run.cfg", kData);
  REQUIRE(cli({"run", "--config", (dir / "run.cfg").string(), "--out", (dir / "o").string()}).code == kExitOk);
  const auto cells = (dir / "o" / "cells.csv").string();
  const auto p = cli({"plot", "--cells", cells, "--metric", "joint_ll", "--out", (dir / "svg").string()});
  CHECK(p.code == kExitOk);
  CHECK(std::filesystem::exists(dir / "svg" / "haberman_nmc_nl4_joint_ll.svg"));

  CHECK(cli({"plot", "--cells", cells, "--metric", "auc", "--out", (dir / "svg").string()}).code == kExitUsage);
  testing_support::write_file(dir / "empty.csv", "");
  const auto e = cli({"plot", "--cells", (dir / "empty.csv").string(), "--metric", "error", "--out",
                      (dir / "svg").string()});
  CHECK(e.code == kExitRuntime);
  CHECK(e.err.find("MalformedCSV") != std::string::npos);
}

TEST_CASE("validate on the bundled data and on damaged copies") {
  const auto ok = cli({"validate", "--data", kData.string()});
  for (const char* name : {"haberman", "ionosphere", "pima", "sonar", "spect", "spectf", "wdbc"}) {
    CHECK(ok.out.find(std::string("PASS ") + name) != std::string::npos);
  }

  TempDir empty("cliempty");
  const auto none = cli({"validate", "--data", empty.path().string()});
  CHECK(none.code != kExitOk);
  CHECK(count(none.out, "FAIL ") == 8);

  TempDir trunc("clitrunc");
  std::istringstream in(testing_support::read_file(kData / "pima.csv"));
  std::ostringstream out;
  std::string line;
  for (int i = 0; i < 700 && std::getline(in, line); ++i) out << line << '\n';
  testing_support::write_file(trunc / "pima.csv", out.str());
  const auto t = cli({"validate", "--data", trunc.path().string()});
  const auto pos = t.out.find("FAIL pima");
  REQUIRE(pos != std::string::npos);
  CHECK(t.out.substr(pos, t.out.find('\n', pos) - pos).find("expected 768") != std::string::npos);
}

TEST_CASE("validate defaults to the data directory from the environment") {
  ::setenv("SEMISUP_DATA_DIR", kData.string().c_str(), 1);
  CHECK(default_data_dir() == kData);
  const auto r = cli({"validate"});
  CHECK(r.out.find("PASS haberman") != std::string::npos);
  ::unsetenv("SEMISUP_DATA_DIR");
  CHECK(default_data_dir() == std::filesystem::path("data"));
}
