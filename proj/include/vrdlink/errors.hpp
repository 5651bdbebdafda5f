// Copyright 2026 The vrdlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace vrdlink {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid options or misuse of the API (maps to exit/status code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Bad input data: unreadable files, malformed documents, violated
// invariants in user-supplied content (maps to exit/status code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized artifacts (JSON programs, graphs, predictions).
class ParseError : public DataError {
 public:
  using DataError::DataError;
};

// Broken construction invariants of DSL values.
class ValidationError : public UsageError {
 public:
  using UsageError::UsageError;
};

}  // namespace vrdlink
