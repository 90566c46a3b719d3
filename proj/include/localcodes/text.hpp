#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace localcodes::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict parsers: the whole field must be consumed. Throw ConfigError
/// naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
std::uint64_t parse_u64(std::string_view s, std::string_view what);

// RFC 4180 CSV: fields containing a comma, quote, CR or LF are quoted and
// embedded quotes doubled; records end with "\n".
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);
/// Parses a whole document into records. Throws DataError on malformed quoting.
std::vector<std::vector<std::string>> parse_csv(std::string_view doc);

}  // namespace localcodes::text
