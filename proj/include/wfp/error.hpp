// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <stdexcept>
#include <string>

namespace wfp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An inverse transform produced a non-negligible imaginary residual.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during sampling.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

}  // namespace wfp
