#pragma once

#include <stdexcept>
#include <string>

namespace latticelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands of incompatible length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed input document (bad JSON, wrong value kinds).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a contract (p < 1, singular map, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The norm under study is not a norm along some direction.
class DegenerateNormError : public Error {
 public:
  using Error::Error;
};

// Ray search in a body failed to bracket the boundary.
class GaugeError : public DegenerateNormError {
 public:
  using DegenerateNormError::DegenerateNormError;
};

}  // namespace latticelab
