//------------------------------------------------------------------------------
//
//   Copyright 2026 The cet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

#include <stdexcept>
#include <string>

namespace cet {

inline constexpr const char* kVersion = "1.0.0";

/// Bad input: malformed pmf, out-of-range parameter, dimension mismatch.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested computation exceeds the configured size budget.
class BudgetError : public ValidationError {
 public:
  explicit BudgetError(const std::string& what) : ValidationError(what) {}
};

/// No feasible factorization satisfied the requested constraints.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cet
