#include "doctest.h"

#include "semisup/error.hpp"
#include "semisup/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

using namespace semisup;

namespace {

CurveCell sample_cell(Index n_u, double mean) {
  CurveCell c;
  c.dataset = "pima";
  c.method = {Method::Constrained, ClassifierKind::Nmc};
  c.n_labeled = 4;
  c.n_unlabeled = n_u;
  c.mean_error = 0.1 + 1.0 / 3.0;
  c.sd_error = 0.05;
  c.se_error = 0.05 / std::sqrt(200.0);
  c.mean_joint_ll = mean;
  c.sd_joint_ll = 1e-300;
  c.se_joint_ll = 123456789.123456789;
  c.mean_marginal_ll = -0.0;
  c.sd_marginal_ll = 2.5e17;
  c.se_marginal_ll = 5e-324;
  c.n_reps = 200;
  c.degenerate_draw_count = 17;
  return c;
}

std::vector<CurveCell> read(const std::string& text) {
  std::istringstream in(text);
  return read_cells_csv(in);
}

ErrorCode code_of(const std::string& text) {
  try {
    read(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("cells header is fixed") {
  CHECK(cells_csv_header() ==
        "schema_version,dataset,method,classifier,n_labeled,n_unlabeled,n_reps,mean_error,sd_error,se_error,"
        "mean_joint_ll,sd_joint_ll,se_joint_ll,mean_marginal_ll,sd_marginal_ll,se_marginal_ll,degenerate_draws");
}

TEST_CASE("cells csv round-trips and re-serializes identically") {
  const std::vector<CurveCell> cells{sample_cell(2, -95.234794266965523), sample_cell(8, -1.0 / 7.0)};
  std::ostringstream first;
  write_cells_csv(first, cells);
  const auto back = read(first.str());
  REQUIRE(back.size() == 2);
  CHECK(back[0].mean_joint_ll == cells[0].mean_joint_ll);
  CHECK(back[1].mean_joint_ll == cells[1].mean_joint_ll);
  CHECK(back[0].se_marginal_ll == cells[0].se_marginal_ll);
  CHECK(back[0].sd_joint_ll == cells[0].sd_joint_ll);
  CHECK(back[0].method == cells[0].method);
  CHECK(back[0].degenerate_draw_count == 17);
  std::ostringstream second;
  write_cells_csv(second, back);
  CHECK(first.str() == second.str());
  CHECK(first.str().find("1,pima,constrained,nmc,4,2,200,0.43333333333333335,") != std::string::npos);
}

TEST_CASE("malformed cells files") {
  const std::string header = std::string(cells_csv_header()) + "\n";
  CHECK(code_of("") == ErrorCode::MalformedCsv);
  CHECK(code_of("a,b,c\n") == ErrorCode::MalformedCsv);
  CHECK(code_of(header + "1,pima,constrained,nmc,4,2\n") == ErrorCode::MalformedCsv);
  CHECK(code_of(header + "2,pima,constrained,nmc,4,2,1,0,0,0,0,0,0,0,0,0,0\n") == ErrorCode::MalformedCsv);
  CHECK(code_of(header + "1,pima,guessing,nmc,4,2,1,0,0,0,0,0,0,0,0,0,0\n") == ErrorCode::MalformedCsv);
  CHECK(code_of(header + "1,pima,constrained,nmc,4,2,1,zero,0,0,0,0,0,0,0,0,0\n") == ErrorCode::MalformedCsv);
  CHECK(read(header).empty());
}

TEST_CASE("cells json mirrors the csv") {
  const std::vector<CurveCell> cells{sample_cell(2, -3.25)};
  const auto doc = nlohmann::json::parse(cells_to_json(cells));
  CHECK(doc["schema_version"] == kCellsSchemaVersion);
  REQUIRE(doc["cells"].size() == 1);
  const auto& c = doc["cells"][0];
  CHECK(c["dataset"] == "pima");
  CHECK(c["method"] == "constrained");
  CHECK(c["classifier"] == "nmc");
  CHECK(c["n_unlabeled"] == 2);
  CHECK(c["joint_ll"]["mean"].get<double>() == -3.25);
  CHECK(c["error"]["se"].get<double>() == cells[0].se_error);
  CHECK(c["degenerate_draws"] == 17);
}

TEST_CASE("audit records") {
  RepRecord r;
  r.rep = 3;
  r.attempt = 1;
  r.error = 0.25;
  r.joint_ll = -1.5;
  r.marginal_ll = -1.25;
  r.redraws = 2;
  r.variance_clamped = true;
  r.iterations = 4;
  std::ostringstream out;
  write_audit_records(out, sample_cell(8, 0.0), {r});
  CHECK(out.str() == "pima,constrained,nmc,4,8,3,1,0.25,-1.5,-1.25,2,1,0,0,4,1,1\n");
  CHECK(audit_csv_header().substr(0, 8) == "dataset,");
}
