// Copyright 2026 The HBS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace hbs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. rank > max_rank).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A probability model that cannot drive codebook construction.
class ModelError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Invalid sketch or codebook configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two sketches with different parameters were combined.
class ParamMismatchError : public Error {
 public:
  using Error::Error;
};

// Internal state or a bit stream does not decode consistently.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// Serialized container is malformed. offset() is the byte position where
// parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace hbs
