#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace semisup {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  bool audit = false;
  std::optional<int> workers;  // overrides the config value
};

/// Runs the configured grid and writes cells.csv, cells.json and, with
/// `audit`, audit.csv into out_dir.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// One SVG per (data set, classifier, labeled size) found in the cells file.
int cmd_plot(const std::filesystem::path& cells_path, const std::string& metric,
             const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// One PASS or FAIL line per registered data set; exit 0 only if all pass.
int cmd_validate(const std::filesystem::path& data_dir, std::ostream& out, std::ostream& err);

/// Default data directory: $SEMISUP_DATA_DIR, else "data".
std::filesystem::path default_data_dir();

/// Parses `run`, `plot` and `validate` subcommands and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semisup
