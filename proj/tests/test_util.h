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

#ifndef QKIN_TESTS_TEST_UTIL_H
#define QKIN_TESTS_TEST_UTIL_H

#include <cmath>
#include <vector>

#include "qkin/linalg.h"

namespace qkin_test {

using qkin::Complex;
using qkin::ComplexMatrix;
using qkin::StateVector;

inline const double kSqrtHalf = std::sqrt(0.5);

inline StateVector ket(std::vector<Complex> amps) { return StateVector(std::move(amps)); }

inline StateVector plus() { return ket({kSqrtHalf, kSqrtHalf}); }

/// Largest |entry| of a^dagger a - I.
inline double orthonormality_error(const ComplexMatrix &a) {
    return qkin::max_abs_diff(a.adjoint() * a, ComplexMatrix::identity(a.cols()));
}

}  // namespace qkin_test

#endif
