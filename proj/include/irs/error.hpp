#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irs {

// Base of every toolkit error. The CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input value outside an operation's domain (non-positive disparity, bad angle, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Map/image shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Reduction over an empty set (no valid pixels, empty histogram).
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Histograms with different binning or kind.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

// Malformed bytes. `offset` is the byte position where decoding stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed file in a variant we do not support (PNG bit depth, PLY property).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace irs
