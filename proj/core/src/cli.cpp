#include "semisup/cli.hpp"

#include "semisup/data_io.hpp"
#include "semisup/error.hpp"
#include "semisup/experiment.hpp"
#include "semisup/report.hpp"
#include "semisup/svg_plot.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace semisup {

namespace {

int report_error(const Error& e, std::ostream& err) {
  err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
  const bool usage = e.code() == ErrorCode::UnknownMetric || e.code() == ErrorCode::InvalidConfig;
  return usage ? kExitUsage : kExitRuntime;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
}

}  // namespace

std::filesystem::path default_data_dir() { return default_config().data_dir; }

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = load_config(options.config_path);
    if (options.workers) {
      config.workers = *options.workers;
      check_config(config);
    }
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + options.out_dir.string() + "': " + ec.message());

    std::ofstream audit;
    CellCallback on_cell;
    if (options.audit) {
      const auto audit_path = options.out_dir / "audit.csv";
      audit.open(audit_path, std::ios::binary);
      if (!audit) throw Error(ErrorCode::Io, "cannot write '" + audit_path.string() + "'");
      audit << audit_csv_header() << '\n';
      on_cell = [&audit](const CellRecords& done) { write_audit_records(audit, done.cell, done.records); };
    }
    const auto cells = run_grid(config, on_cell);
    if (options.audit && !audit.flush()) throw Error(ErrorCode::Io, "audit log write failed");

    std::ostringstream csv;
    write_cells_csv(csv, cells);
    write_text(options.out_dir / "cells.csv", csv.str());
    write_text(options.out_dir / "cells.json", cells_to_json(cells));
    out << "wrote " << cells.size() << " cells to " << (options.out_dir / "cells.csv").string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_plot(const std::filesystem::path& cells_path, const std::string& metric_text,
             const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const Metric metric = parse_metric(metric_text);
    std::ifstream in(cells_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + cells_path.string() + "'");
    const auto cells = read_cells_csv(in);
    if (cells.empty()) throw Error(ErrorCode::MalformedCsv, "'" + cells_path.string() + "' holds no cells");
    for (const auto& path : write_plots(cells, metric, out_dir)) out << "wrote " << path.string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_validate(const std::filesystem::path& data_dir, std::ostream& out, std::ostream& err) {
  int failures = 0;
  for (const auto& spec : dataset_registry()) {
    const auto path = data_dir / (spec.name + ".csv");
    try {
      if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, "missing file '" + path.string() + "'");
      const Dataset data = load_dataset(path, spec);
      const auto counts = class_counts(data);
      const double smallest =
          static_cast<double>(std::min(counts[0], counts[1])) / static_cast<double>(data.size());
      out << "PASS " << spec.name << ": " << data.size() << " objects, d = " << data.dim() << ", smallest prior "
          << std::fixed << std::setprecision(3) << smallest << std::defaultfloat << " (expected "
          << spec.expected_smallest_prior << ")\n";
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << spec.name << ": " << e.what() << '\n';
    }
  }
  if (failures > 0) {
    err << failures << " of " << dataset_registry().size() << " data sets failed validation\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-supervised NMC and LDA learning curves"};
  app.require_subcommand(1);

  RunOptions run;
  int workers = 0;
  auto* run_cmd = app.add_subcommand("run", "run the experiment grid");
  run_cmd->add_option("--config", run.config_path, "config file")->required();
  run_cmd->add_option("--out", run.out_dir, "output directory")->required();
  run_cmd->add_flag("--audit", run.audit, "also write the per-repetition audit.csv");
  run_cmd->add_option("--workers", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);

  std::filesystem::path cells_path, plot_out;
  std::string metric;
  auto* plot_cmd = app.add_subcommand("plot", "render learning curves as SVG");
  plot_cmd->add_option("--cells", cells_path, "cells.csv from a run")->required();
  plot_cmd->add_option("--metric", metric, "error, joint_ll or marginal_ll")->required();
  plot_cmd->add_option("--out", plot_out, "output directory")->required();

  std::filesystem::path data_dir = default_data_dir();
  auto* validate_cmd = app.add_subcommand("validate", "check the canonical data files");
  validate_cmd->add_option("--data", data_dir, "data directory (default $SEMISUP_DATA_DIR or ./data)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) {
    if (workers > 0) run.workers = workers;
    return cmd_run(run, out, err);
  }
  if (*plot_cmd) return cmd_plot(cells_path, metric, plot_out, out, err);
  return cmd_validate(data_dir, out, err);
}

}  // namespace semisup
