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

// Seeded random objects. Every stochastic routine in the library takes an
// explicit seed or engine; nothing reads global state.

#ifndef QKIN_RANDOM_H
#define QKIN_RANDOM_H

#include <cstdint>
#include <random>
#include <span>

#include "qkin/linalg.h"

namespace qkin {

using Rng = std::mt19937_64;

/// Independent sub-seed for stream `index` of a run seeded with `seed`
/// (SplitMix64 mixing). The result depends only on (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng &rng);

/// Index drawn from a categorical distribution by inverse CDF. The last
/// index with positive weight absorbs rounding in the cumulative sum.
std::size_t sample_categorical(std::span<const double> probabilities, Rng &rng);

/// Haar-random pure state.
StateVector random_state(std::size_t dim, Rng &rng);
/// Haar-random unitary (Gram-Schmidt of a complex Ginibre matrix).
ComplexMatrix random_unitary(std::size_t dim, Rng &rng);
/// Hilbert-Schmidt random density operator (G G† / Tr, G Ginibre).
DensityOperator random_density(std::size_t dim, Rng &rng);
/// Hermitian matrix with standard normal entries (GUE-like).
ComplexMatrix random_hermitian(std::size_t dim, Rng &rng);

}  // namespace qkin

#endif
