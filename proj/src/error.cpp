/* Copyright 2026 The Identity Lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "idlab/error.hpp"

namespace idlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kComplementTooSmall: return "complement-too-small";
    case ErrorKind::kRankError: return "rank-error";
    case ErrorKind::kNotEnoughPatterns: return "not-enough-patterns";
    case ErrorKind::kDivisionByZero: return "division-by-zero";
    case ErrorKind::kNoUniqueMinimizer: return "no-unique-minimizer";
    case ErrorKind::kFormatError: return "format-error";
    case ErrorKind::kIoError: return "io-error";
    case ErrorKind::kDivergence: return "divergence";
  }
  return "unknown";
}

}  // namespace idlab
