#pragma once

#include "semisup/experiment.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace semisup {

inline constexpr int kCellsSchemaVersion = 1;

/// Header line of cells.csv, without the trailing newline.
std::string_view cells_csv_header();

/// Header plus one row per cell; numbers use 17 significant digits.
void write_cells_csv(std::ostream& out, const std::vector<CurveCell>& cells);

/// Inverse of write_cells_csv. Throws MalformedCsv on an empty input, a
/// foreign header, a wrong field count, an unknown schema version or an
/// unparsable field.
std::vector<CurveCell> read_cells_csv(std::istream& in);

/// Same content as the CSV, as a JSON document with a schema_version and a
/// "cells" array.
std::string cells_to_json(const std::vector<CurveCell>& cells);

std::string_view audit_csv_header();

/// One line per repetition, keyed by the cell it belongs to.
void write_audit_records(std::ostream& out, const CurveCell& cell, const std::vector<RepRecord>& records);

}  // namespace semisup
