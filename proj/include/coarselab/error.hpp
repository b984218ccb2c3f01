// Copyright 2026 The Coarselab Authors
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

namespace coarselab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point was handed to a space (or analyzer) of a different model.
class ModelMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed input: bad letters, negative radii, unsorted grids, etc.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed the configured cardinality cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + " points)"), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

// Truncated boundary words do not carry enough digits for the request.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// A map flagged as an isometry was caught changing a distance.
class IsometryViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace coarselab
