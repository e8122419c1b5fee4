// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <stdexcept>

namespace genrec {

// Invalid distribution or operation parameters (bad mean, nonpositive
// concentration, probability outside [0,1], ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid generator configuration; message names the offending field.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Estimation cannot proceed (degenerate sample, too few tail points).
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent dataset file; message carries the line number.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace genrec
