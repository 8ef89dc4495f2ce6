#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace lrm {

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

/// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_double(double v);

/// Joins values with commas using format_double.
std::string join_doubles(std::span<const double> values);

}  // namespace lrm
