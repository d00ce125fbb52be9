#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fedcodec {

// Bitstream or container that cannot be parsed. `offset` is the position of
// the failure: bits into the payload for code-level errors, bytes into the
// file for framing errors (see message text).
class CorruptStreamError : public std::runtime_error {
 public:
  CorruptStreamError(const std::string& what, uint64_t offset)
      : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  uint64_t offset() const { return offset_; }

 private:
  uint64_t offset_;
};

// No grid point satisfies the requested rate budget.
class InfeasibleBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment/config file fails schema validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File cannot be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedcodec
