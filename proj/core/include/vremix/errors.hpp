#pragma once

#include <stdexcept>
#include <string>

namespace vremix {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad header, non-numeric cell, ...). Messages carry
/// the file path and 1-based line number where known.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input whose values violate a documented constraint;
/// the message names the offending field or row.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Missing timestamps in a series that must be gap-free.
class GapError : public Error {
 public:
  using Error::Error;
};

/// Series passed together do not share one time axis.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Too few samples for the requested statistic or fit.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// An operation that needs at least one sample received none.
class EmptySeries : public Error {
 public:
  using Error::Error;
};

/// A value outside the mathematical domain of an operation
/// (zero demand in a ratio, nonpositive height, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A statistical fit could not be carried out on the given data.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerical procedure failed to converge or produced an
/// out-of-tolerance result; the message carries diagnostics.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Requested date or period not covered by the available data.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A query had no answer (e.g. no frontier point under a risk bound).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace vremix
