// Copyright 2026 The coinlab Authors
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

namespace coinlab {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an operation's arguments was violated.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a fixed computational budget (e.g. 2^n enumeration).
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration: unknown key, unparsable value, missing seed.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A property that must hold by construction did not. Indicates a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace coinlab
