#include "semisup/report.hpp"

#include "semisup/error.hpp"
#include "semisup/number_format.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace semisup {

namespace {

constexpr std::string_view kCellsHeader =
    "schema_version,dataset,method,classifier,n_labeled,n_unlabeled,n_reps,mean_error,sd_error,se_error,"
    "mean_joint_ll,sd_joint_ll,se_joint_ll,mean_marginal_ll,sd_marginal_ll,se_marginal_ll,degenerate_draws";
constexpr std::size_t kCellsFields = 17;

constexpr std::string_view kAuditHeader =
    "dataset,method,classifier,n_labeled,n_unlabeled,rep,attempt,error,joint_ll,marginal_ll,redraws,"
    "variance_clamped,ridge_applied,psd_repaired,iterations,converged,objective_monotone";

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::MalformedCsv, "cells line " + std::to_string(line_no) + ": " + what);
}

template <typename Int>
Int to_int(std::string_view text, std::size_t line_no, std::string_view field) {
  Int value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    malformed(line_no, "bad integer in " + std::string(field) + ": '" + std::string(text) + "'");
  }
  return value;
}

double to_double(std::string_view text, std::size_t line_no, std::string_view field) {
  const auto v = parse_double(text);
  if (!v) malformed(line_no, "bad number in " + std::string(field) + ": '" + std::string(text) + "'");
  return *v;
}

}  // namespace

std::string_view cells_csv_header() { return kCellsHeader; }
std::string_view audit_csv_header() { return kAuditHeader; }

void write_cells_csv(std::ostream& out, const std::vector<CurveCell>& cells) {
  out << kCellsHeader << '\n';
  for (const auto& c : cells) {
    out << kCellsSchemaVersion << ',' << c.dataset << ',' << to_string(c.method.method) << ','
        << to_string(c.method.kind) << ',' << c.n_labeled << ',' << c.n_unlabeled << ',' << c.n_reps;
    for (double v : {c.mean_error, c.sd_error, c.se_error, c.mean_joint_ll, c.sd_joint_ll, c.se_joint_ll,
                     c.mean_marginal_ll, c.sd_marginal_ll, c.se_marginal_ll}) {
      out << ',' << format_double(v);
    }
    out << ',' << c.degenerate_draw_count << '\n';
  }
}

std::vector<CurveCell> read_cells_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<CurveCell> cells;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (line != kCellsHeader) malformed(line_no, "unexpected header");
      have_header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != kCellsFields) {
      malformed(line_no, "found " + std::to_string(f.size()) + " fields, expected " + std::to_string(kCellsFields));
    }
    if (to_int<int>(f[0], line_no, "schema_version") != kCellsSchemaVersion) {
      malformed(line_no, "unsupported schema version " + std::string(f[0]));
    }
    CurveCell c;
    c.dataset = std::string(f[1]);
    if (c.dataset.empty()) malformed(line_no, "empty dataset name");
    try {
      c.method = {parse_method(f[2]), parse_classifier_kind(f[3])};
    } catch (const Error& e) {
      malformed(line_no, e.what());
    }
    c.n_labeled = to_int<Index>(f[4], line_no, "n_labeled");
    c.n_unlabeled = to_int<Index>(f[5], line_no, "n_unlabeled");
    c.n_reps = to_int<int>(f[6], line_no, "n_reps");
    double* targets[] = {&c.mean_error,    &c.sd_error,         &c.se_error,       &c.mean_joint_ll,
                         &c.sd_joint_ll,   &c.se_joint_ll,      &c.mean_marginal_ll, &c.sd_marginal_ll,
                         &c.se_marginal_ll};
    for (std::size_t i = 0; i < 9; ++i) *targets[i] = to_double(f[7 + i], line_no, "statistic");
    c.degenerate_draw_count = to_int<Index>(f[16], line_no, "degenerate_draws");
    cells.push_back(std::move(c));
  }
  if (!have_header) throw Error(ErrorCode::MalformedCsv, "cells file is empty");
  return cells;
}

std::string cells_to_json(const std::vector<CurveCell>& cells) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kCellsSchemaVersion;
  auto& arr = doc["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    arr.push_back({{"dataset", c.dataset},
                   {"method", std::string(to_string(c.method.method))},
                   {"classifier", std::string(to_string(c.method.kind))},
                   {"n_labeled", c.n_labeled},
                   {"n_unlabeled", c.n_unlabeled},
                   {"n_reps", c.n_reps},
                   {"error", {{"mean", c.mean_error}, {"sd", c.sd_error}, {"se", c.se_error}}},
                   {"joint_ll", {{"mean", c.mean_joint_ll}, {"sd", c.sd_joint_ll}, {"se", c.se_joint_ll}}},
                   {"marginal_ll",
                    {{"mean", c.mean_marginal_ll}, {"sd", c.sd_marginal_ll}, {"se", c.se_marginal_ll}}},
                   {"degenerate_draws", c.degenerate_draw_count}});
  }
  return doc.dump(2) + "\n";
}

void write_audit_records(std::ostream& out, const CurveCell& cell, const std::vector<RepRecord>& records) {
  for (const auto& r : records) {
    out << cell.dataset << ',' << to_string(cell.method.method) << ',' << to_string(cell.method.kind) << ','
        << cell.n_labeled << ',' << cell.n_unlabeled << ',' << r.rep << ',' << r.attempt << ','
        << format_double(r.error) << ',' << format_double(r.joint_ll) << ',' << format_double(r.marginal_ll) << ','
        << r.redraws << ',' << int{r.variance_clamped} << ',' << int{r.ridge_applied} << ','
        << int{r.psd_repaired} << ',' << r.iterations << ',' << int{r.converged} << ','
        << int{r.objective_monotone} << '\n';
  }
}

}  // namespace semisup
