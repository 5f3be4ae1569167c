#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace textfract {

enum class ErrorKind {
  Decoding,
  EmptyInput,
  InsufficientOccurrences,
  Bounds,
  TooShort,
  InvalidParameter,
  InsufficientPoints,
  DegenerateFit,
  SingularSegment,
  ScaleRange,
  NonUniformGrid,
  MissingQ,
  EmptyIntersection,
  Io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Decoding: return "decoding";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::InsufficientOccurrences: return "insufficient-occurrences";
    case ErrorKind::Bounds: return "bounds";
    case ErrorKind::TooShort: return "too-short";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InsufficientPoints: return "insufficient-points";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::SingularSegment: return "singular-segment";
    case ErrorKind::ScaleRange: return "scale-range";
    case ErrorKind::NonUniformGrid: return "non-uniform-grid";
    case ErrorKind::MissingQ: return "missing-q";
    case ErrorKind::EmptyIntersection: return "empty-intersection";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Invalid UTF-8; `offset` is the byte index of the first bad sequence.
class DecodingError : public Error {
 public:
  explicit DecodingError(std::size_t offset)
      : Error(ErrorKind::Decoding, "invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// F^2(nu, s) vanished where a non-positive moment q was requested.
class SingularSegmentError : public Error {
 public:
  SingularSegmentError(std::size_t segment, std::size_t scale)
      : Error(ErrorKind::SingularSegment, "zero detrended variance in segment " +
                                              std::to_string(segment) + " at scale " +
                                              std::to_string(scale)),
        segment_(segment),
        scale_(scale) {}

  std::size_t segment() const noexcept { return segment_; }
  std::size_t scale() const noexcept { return scale_; }

 private:
  std::size_t segment_;
  std::size_t scale_;
};

class InsufficientOccurrencesError : public Error {
 public:
  InsufficientOccurrencesError(const std::string& target, std::size_t count)
      : Error(ErrorKind::InsufficientOccurrences,
              "'" + target + "' occurs " + std::to_string(count) + " time(s), need at least 2"),
        count_(count) {}

  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

}  // namespace textfract
