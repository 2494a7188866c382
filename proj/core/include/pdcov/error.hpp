#pragma once

#include <stdexcept>
#include <string>

namespace pdcov {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed data: non-finite entries, shape mismatches, ragged CSV rows.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A sample whose pairwise distances are all zero, so S2 = 0 and the
// normalized statistic is undefined.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent settings: fold count above sample size, zero replications,
// overlapping column blocks.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdcov
