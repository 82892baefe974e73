// Copyright 2026 The qkin Authors
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

#ifndef QKIN_ERRORS_H
#define QKIN_ERRORS_H

#include <stdexcept>
#include <string>

namespace qkin {

/// Shapes or dimensions of the operands do not fit together.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A value violates an invariant of its type (non-Hermitian "density
/// operator", incomplete PVM, probability outside [0, 1], ...).
struct InvariantError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An iterative numerical method failed to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The operation is mathematically undefined for this input, e.g. Lüders
/// conditionalization on a zero-probability event.
struct UndefinedOperationError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Malformed configuration or serialized input.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qkin

#endif
