// Copyright 2026 The selmer-ff Authors
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

#ifndef SELMER_ERRORS_HPP
#define SELMER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace selmer {

/// Caller violated a documented precondition (bad field, bad degree, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be completed or produced inconsistent data.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work or memory budget would be exceeded.
class BudgetExceeded : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace selmer

#endif  // SELMER_ERRORS_HPP
