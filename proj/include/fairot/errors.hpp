// Copyright 2026 The fairot Authors
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

#include <stdexcept>
#include <string>

namespace fairot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: schema violations, dimension mismatches, out-of-range
/// parameters, unknown groups or labels. Maps to process exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numeric infeasibility: weight vectors that are not a probability
/// distribution beyond tolerance, or a solver that cannot reach a feasible
/// basis. Maps to process exit code 3.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairot
