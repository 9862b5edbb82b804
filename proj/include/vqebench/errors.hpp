// Copyright 2026 The vqebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vqebench {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on qubit count or vector length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed FCIDUMP, manifest or operator text. `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Excitation generator violating spin conservation or realizing to zero.
class InvalidGeneratorError : public Error {
 public:
  using Error::Error;
};

/// Sector dimension exceeds the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An operator maps a subspace state outside the subspace.
class SectorLeakageError : public Error {
 public:
  using Error::Error;
};

/// Bad user input: unknown fixture, invalid flag value, missing file.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqebench
