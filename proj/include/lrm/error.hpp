#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrm {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offending row.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what);

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by compute_disbalance when every level of the book is empty.
class EmptyBookError : public Error {
 public:
  EmptyBookError() : Error("empty book") {}
};

}  // namespace lrm
