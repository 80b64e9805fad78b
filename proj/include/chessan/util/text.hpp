#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chessan {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split_whitespace(std::string_view s);
std::string ascii_lower(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::optional<long long> parse_integer(std::string_view s) noexcept;
std::optional<double> parse_double(std::string_view s) noexcept;

/// Shortest text that parses back to the same double.
std::string format_double(double v);

/// Writes via a sibling temp file, fsync and rename, so readers observe
/// either the old or the new content.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

/// fsyncs `tmp` and renames it over `path`.
void commit_file(const std::filesystem::path& tmp, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// UTC timestamp, e.g. 2015-08-01T12:00:00.123Z
std::string utc_timestamp_now();

} // namespace chessan
