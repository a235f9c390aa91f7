// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace infhbd {

// Invalid cluster/job/scenario parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; message carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested ring cannot be threaded through the topology.
class InfeasibleRingError : public std::runtime_error {
 public:
  explicit InfeasibleRingError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace infhbd
