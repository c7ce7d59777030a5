#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace photon_ur {

/// Locale-independent decimal with 17 significant digits.
std::string format_double(double value);

/// Locale-independent parse of a whole token.
bool parse_double(const std::string &token, double &value);

/// Serializes JSON with `format_double` for floating-point numbers. NaN and
/// infinities are rejected with a numeric error.
std::string to_json_text(const nlohmann::json &value, int indent = 2);

/// RFC 4180 field quoting.
std::string csv_field(const std::string &text);

/// Header row followed by data rows, CRLF-free ("\n" line endings).
std::string to_csv(const std::vector<std::string> &header,
                   const std::vector<std::vector<std::string>> &rows);

/// Writes through a temporary file in the same directory, then renames.
void write_atomically(const std::filesystem::path &path,
                      const std::string &contents);

} // namespace photon_ur
