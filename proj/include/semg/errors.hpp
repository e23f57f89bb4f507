#pragma once

#include <stdexcept>
#include <string>

namespace semg {

// Validation-class failures. The CLI maps these to exit code 1.
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input too short / constant / zero-variance for the requested statistic.
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inconsistent or incomplete data (duplicate keys, missing class coverage).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file contents (wrong column count, non-numeric cell).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable files referenced by a manifest.
struct IngestionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime-class failures. The CLI maps these to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite cost during training; carries the offending iteration.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, int iteration_index)
      : std::runtime_error(what), iteration(iteration_index) {}
  int iteration;
};

}  // namespace semg
