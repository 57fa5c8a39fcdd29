// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pcqa {

// Base for every error raised by the library. The CLI maps ValidationError to
// exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, violated preconditions, inconsistent config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failure while doing the work (I/O, external tools, numerics).
class RuntimeError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcqa
