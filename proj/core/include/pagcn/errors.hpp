// Copyright 2026 The pagcn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pagcn {

// Base class for every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI when it prints structured errors.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Caller violated a documented precondition (shapes, ranges, empty inputs).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& message)
      : Error("contract", message) {}
};

// NaN or infinity where finite values are required.
class NumericDomainError : public Error {
 public:
  explicit NumericDomainError(const std::string& message)
      : Error("numeric_domain", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error("configuration", message) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line,
             const std::string& message)
      : Error("parse", path + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& message)
      : Error("resolution", message) {}
};

class SamplingError : public Error {
 public:
  explicit SamplingError(const std::string& message)
      : Error("sampling", message) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& message)
      : Error("divergence",
              "epoch " + std::to_string(epoch) + ": " + message),
        epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace pagcn
