// Copyright 2026 The WattMatch Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WATTMATCH_ERRORS_HPP
#define WATTMATCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wattmatch {

// Invalid shapes, sizes or parameter values supplied by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Input too short to produce any output (e.g. window longer than the series).
class EmptyInputError : public ArgumentError {
 public:
  explicit EmptyInputError(const std::string& msg) : ArgumentError(msg) {}
};

// Values outside the mathematical domain of an operation (e.g. KL on
// non-positive data).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wattmatch

#endif
