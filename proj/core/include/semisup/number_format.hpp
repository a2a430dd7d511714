#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace semisup {

/// "%.17g" rendering; round-trips every finite double exactly.
std::string format_double(double value);

/// Parse a full decimal token (surrounding blanks allowed). nullopt on any
/// trailing garbage or an empty token.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace semisup
