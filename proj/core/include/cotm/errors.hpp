// Copyright 2026 The CoTM Authors
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

#ifndef COTM_ERRORS_HPP_
#define COTM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cotm {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector or matrix dimensions disagree with the model or with each other.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A parameter combination is invalid (t = 0, even window, n % m != 0, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A structural invariant was violated, e.g. a memory state outside [1, 2N].
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents: bad magic, truncation, CRC mismatch.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Semantically invalid input (empty dataset, unknown class, empty corpus).
class InputError : public Error {
 public:
  using Error::Error;
};

// The filesystem refused a read or write.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cotm

#endif  // COTM_ERRORS_HPP_
