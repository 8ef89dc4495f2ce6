#pragma once

#include <filesystem>

#include "lrm/series.hpp"

namespace lrm {

// Layout, all little-endian:
//   bytes 0..3   magic "LRM1"
//   bytes 4..7   u32 time-domain tag (0 real seconds, 1 event ticks)
//   bytes 8..15  u64 point count n
//   then n f64 times followed by n f64 values.
// Origin metadata is not stored; the ingest manifest carries it.

void write_series_cache(const std::filesystem::path& path, const Series& series);
Series read_series_cache(const std::filesystem::path& path);

}  // namespace lrm
