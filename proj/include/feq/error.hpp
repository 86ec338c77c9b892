#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace feq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element or expression does not match the coordinate layout of a group.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression node (zero multiplicative ratio, torsion coefficient on
/// an additive node, table entry above its declared bound).
class InvalidExpression : public Error {
 public:
  using Error::Error;
};

/// A value left the representable range (overflowing coordinates or a
/// multiplicative partial above the evaluation guard).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A fit whose hypotheses fail on the data (null denominators, zero samples).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Input that does not parse against the JSON schemas.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Family parameters that violate one or more of the tag's constraints.
class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(std::vector<std::string> failures);

  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  std::vector<std::string> failures_;
};

/// Classification was refused because the defect is not bounded.
class RefusedError : public Error {
 public:
  using Error::Error;
};

}  // namespace feq
