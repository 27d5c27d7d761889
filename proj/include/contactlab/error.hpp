#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contactlab {

/// Base of every error the engine throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain of an elementary function (log of a
/// non-positive number, division by zero, sqrt of a negative number).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// A geometric precondition failed (singular metric, rank-deficient
/// Jacobian, excluded point, non-orthonormal basis, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A declared warped-product structure is inconsistent with the metric.
class WarpError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Invalid run configuration. `pointer()` is a JSON pointer into the config.
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace contactlab
