#include "lrm/cache.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>

#include "lrm/error.hpp"
#include "lrm/io.hpp"

namespace lrm {
namespace {

constexpr std::array<char, 4> kMagic{'L', 'R', 'M', '1'};
constexpr bool kLittle = std::endian::native == std::endian::little;

template <class T>
T swap_bytes(T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  std::reverse(b.begin(), b.end());
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

template <class T>
T to_little(T v) {
  if constexpr (kLittle) return v;
  return swap_bytes(v);
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_column(std::ostream& out, std::span<const double> column) {
  if constexpr (kLittle) {
    out.write(reinterpret_cast<const char*>(column.data()),
              static_cast<std::streamsize>(column.size_bytes()));
  } else {
    for (double v : column) put(out, v);
  }
}

void get_column(std::istream& in, std::vector<double>& column,
                const std::filesystem::path& path) {
  if (!in.read(reinterpret_cast<char*>(column.data()),
               static_cast<std::streamsize>(column.size() * sizeof(double))))
    throw Error("truncated series cache " + path.string());
  if constexpr (!kLittle)
    for (auto& v : column) v = swap_bytes(v);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw Error("truncated series cache " + path.string());
  return to_little(v);
}

}  // namespace

void write_series_cache(const std::filesystem::path& path, const Series& series) {
  if (series.t.size() != series.x.size()) throw Error("series columns differ in length");
  write_file_atomic(path, [&](std::ostream& out) {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(series.domain));
    put<std::uint64_t>(out, series.size());
    put_column(out, series.t);
    put_column(out, series.x);
  });
}

Series read_series_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw Error(path.string() + " is not an LRM1 series cache");
  const auto tag = get<std::uint32_t>(in, path);
  if (tag > 1) throw Error(path.string() + ": unknown domain tag " + std::to_string(tag));
  const auto n = get<std::uint64_t>(in, path);

  const auto size = std::filesystem::file_size(path);
  if (size < 16 || (size - 16) % 16 != 0 || (size - 16) / 16 != n) throw Error(path.string() + ": size does not match point count");

  Series s;
  s.domain = static_cast<TimeDomain>(tag);
  s.t.resize(n);
  s.x.resize(n);
  get_column(in, s.t, path);
  get_column(in, s.x, path);
  return s;
}

}  // namespace lrm
