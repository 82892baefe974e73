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

#include "qkin/random.h"

#include <cmath>

#include "qkin/errors.h"

namespace qkin {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Complex gaussian(Rng &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_categorical(std::span<const double> probabilities, Rng &rng) {
    if (probabilities.empty()) {
        throw DimensionError("sample_categorical: empty distribution");
    }
    double u = uniform01(rng);
    double cumulative = 0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] > 0) {
            last_positive = i;
            cumulative += probabilities[i];
            if (u < cumulative) {
                return i;
            }
        }
    }
    return last_positive;
}

StateVector random_state(std::size_t dim, Rng &rng) {
    std::vector<Complex> v(dim);
    for (auto &z : v) {
        z = gaussian(rng);
    }
    return StateVector::normalized(std::move(v));
}

ComplexMatrix random_unitary(std::size_t dim, Rng &rng) {
    ComplexMatrix u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<Complex> w(dim);
        for (auto &z : w) {
            z = gaussian(rng);
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < c; ++j) {
                Complex proj = 0;
                for (std::size_t r = 0; r < dim; ++r) {
                    proj += std::conj(u(r, j)) * w[r];
                }
                for (std::size_t r = 0; r < dim; ++r) {
                    w[r] -= proj * u(r, j);
                }
            }
        }
        double n = 0;
        for (auto z : w) {
            n += std::norm(z);
        }
        n = std::sqrt(n);
        for (std::size_t r = 0; r < dim; ++r) {
            u(r, c) = w[r] / n;
        }
    }
    return u;
}

DensityOperator random_density(std::size_t dim, Rng &rng) {
    ComplexMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            g(r, c) = gaussian(rng);
        }
    }
    ComplexMatrix m = hermitian_part(g * g.adjoint());
    m *= Complex(1.0 / m.trace().real());
    return DensityOperator(std::move(m));
}

ComplexMatrix random_hermitian(std::size_t dim, Rng &rng) {
    ComplexMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            g(r, c) = gaussian(rng);
        }
    }
    return hermitian_part(g);
}

}  // namespace qkin
