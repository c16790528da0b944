#pragma once

#include <stdexcept>
#include <string>

namespace pqe {

// I/O failures (missing file, short read/write).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural problems in one of the on-disk formats (bad magic, unsupported
// version, truncation, non-finite payload, malformed text line).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated preconditions and invalid configurations.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace pqe
