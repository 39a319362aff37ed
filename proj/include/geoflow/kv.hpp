#pragma once

// Flat "key = value" text format shared by surface files and run configs.
// One pair per line; '#' starts a comment; surrounding whitespace is ignored.

#include <map>
#include <string>
#include <vector>

namespace geoflow {

using KeyValues = std::map<std::string, std::string>;

/// Throws config error on a malformed line or a duplicated key.
KeyValues parse_key_values(const std::string& text);
std::string read_text_file(const std::string& path);

double parse_double(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);
/// Comma separated list of doubles.
std::vector<double> parse_double_list(const std::string& key, const std::string& value);

}  // namespace geoflow
