#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace geoflow {

/// Shortest text that parses back to exactly the same double.
std::string format_double(double x);
std::string sha256_hex(std::string_view data);
void write_text_file(const std::filesystem::path& path, std::string_view text);
/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace geoflow
