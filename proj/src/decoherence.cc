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

#include "qkin/decoherence.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qkin/config.h"
#include "qkin/errors.h"

namespace qkin {

namespace {

void require_pointer_index(const EnvironmentSpec &env, std::size_t k) {
    if (k >= env.pointer_count()) {
        throw DimensionError("pointer index " + std::to_string(k) + " out of range (" +
                             std::to_string(env.pointer_count()) + " pointer states)");
    }
}

SweepRow sweep_row(const TriDecomposedState &state, const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                   double t) {
    SweepRow row;
    row.t = t;
    for (auto [k, kp] : pairs) {
        row.abs_zeta.push_back(std::abs(decoherence_factor(state.env(), k, kp, t)));
    }
    row.classicality = classicality(state, t);
    return row;
}

}  // namespace

EnvironmentSpec::EnvironmentSpec(std::vector<Complex> gamma, std::vector<std::vector<double>> couplings)
    : gamma_(std::move(gamma)), couplings_(std::move(couplings)) {
    if (gamma_.empty()) {
        throw DimensionError("EnvironmentSpec: empty environment");
    }
    if (couplings_.empty()) {
        throw DimensionError("EnvironmentSpec: no pointer rows in couplings");
    }
    double norm = 0;
    for (auto g : gamma_) {
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            throw InvariantError("EnvironmentSpec: non-finite amplitude");
        }
        norm += std::norm(g);
    }
    if (std::abs(norm - 1.0) > 1e-12) {
        throw InvariantError("EnvironmentSpec: sum |gamma|^2 = " + std::to_string(norm) + ", expected 1");
    }
    for (const auto &row : couplings_) {
        if (row.size() != gamma_.size()) {
            throw DimensionError("EnvironmentSpec: coupling row of length " + std::to_string(row.size()) +
                                 " for " + std::to_string(gamma_.size()) + " environment modes");
        }
        for (double g : row) {
            if (!std::isfinite(g)) {
                throw InvariantError("EnvironmentSpec: non-finite coupling");
            }
        }
    }
}

TriDecomposedState::TriDecomposedState(std::vector<Complex> c, std::vector<StateVector> s_vectors,
                                       EnvironmentSpec env)
    : c_(std::move(c)), s_vectors_(std::move(s_vectors)), env_(std::move(env)) {
    if (c_.empty() || c_.size() != s_vectors_.size() || c_.size() != env_.pointer_count()) {
        throw DimensionError("TriDecomposedState: " + std::to_string(c_.size()) + " amplitudes, " +
                             std::to_string(s_vectors_.size()) + " system kets, " +
                             std::to_string(env_.pointer_count()) + " coupling rows");
    }
    for (const auto &s : s_vectors_) {
        if (s.dim() != s_vectors_.front().dim()) {
            throw DimensionError("TriDecomposedState: system kets of different dimensions");
        }
    }
    double norm = 0;
    for (auto z : c_) {
        norm += std::norm(z);
    }
    if (std::abs(norm - 1.0) > 1e-12) {
        throw InvariantError("TriDecomposedState: sum |c_k|^2 = " + std::to_string(norm) + ", expected 1");
    }
}

ComplexMatrix build_interaction_hamiltonian(const EnvironmentSpec &env, std::size_t m_dim) {
    if (m_dim != env.pointer_count()) {
        throw DimensionError("build_interaction_hamiltonian: couplings have " + std::to_string(env.pointer_count()) +
                             " rows, macro dimension is " + std::to_string(m_dim));
    }
    const std::size_t n = env.n_env();
    ComplexMatrix h(m_dim * n, m_dim * n);
    for (std::size_t k = 0; k < m_dim; ++k) {
        for (std::size_t nu = 0; nu < n; ++nu) {
            h(k * n + nu, k * n + nu) = env.couplings()[k][nu];
        }
    }
    return h;
}

ComplexMatrix pointer_observable(std::span<const double> values, std::size_t n_env) {
    return tensor_product(ComplexMatrix::diagonal(values), ComplexMatrix::identity(n_env));
}

StateVector evolve_environment(const EnvironmentSpec &env, std::size_t k, double t) {
    require_pointer_index(env, k);
    if (!std::isfinite(t)) {
        throw InvariantError("evolve_environment: non-finite time");
    }
    std::vector<Complex> amps(env.n_env());
    for (std::size_t nu = 0; nu < env.n_env(); ++nu) {
        amps[nu] = env.gamma()[nu] * std::polar(1.0, -env.couplings()[k][nu] * t);
    }
    return StateVector(std::move(amps));
}

Complex decoherence_factor(const EnvironmentSpec &env, std::size_t k, std::size_t k_prime, double t) {
    require_pointer_index(env, k);
    require_pointer_index(env, k_prime);
    if (k == k_prime) {
        return 1.0;
    }
    Complex z = 0;
    for (std::size_t nu = 0; nu < env.n_env(); ++nu) {
        double phase = (env.couplings()[k_prime][nu] - env.couplings()[k][nu]) * t;
        z += std::norm(env.gamma()[nu]) * std::polar(1.0, phase);
    }
    return z;
}

DensityOperator reduced_macro_state(const TriDecomposedState &state, double t) {
    const std::size_t m = state.m_dim();
    ComplexMatrix rho(m, m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t kp = 0; kp < m; ++kp) {
            rho(k, kp) = state.c()[k] * std::conj(state.c()[kp]) * inner(state.s_vectors()[kp], state.s_vectors()[k]) *
                         decoherence_factor(state.env(), k, kp, t);
        }
    }
    rho = hermitian_part(rho);
    rho *= Complex(1.0 / rho.trace().real());
    return DensityOperator(std::move(rho));
}

StateVector tripartite_state(const TriDecomposedState &state, double t) {
    const std::size_t ds = state.system_dim(), m = state.m_dim(), n = state.env().n_env();
    if (state.total_dim() > tolerances().max_crosscheck_dim) {
        throw DimensionError("tripartite_state: dimension " + std::to_string(state.total_dim()) + " exceeds " +
                             std::to_string(tolerances().max_crosscheck_dim));
    }
    std::vector<Complex> psi(ds * m * n, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        StateVector eps = evolve_environment(state.env(), k, t);
        const auto &s = state.s_vectors()[k];
        for (std::size_t i = 0; i < ds; ++i) {
            Complex cs = state.c()[k] * s[i];
            for (std::size_t nu = 0; nu < n; ++nu) {
                psi[(i * m + k) * n + nu] += cs * eps[nu];
            }
        }
    }
    return StateVector::normalized(std::move(psi));
}

std::optional<double> reduced_state_crosscheck(const TriDecomposedState &state, double t) {
    if (state.total_dim() > tolerances().max_crosscheck_dim) {
        return std::nullopt;
    }
    const std::size_t dims[] = {state.system_dim(), state.m_dim(), state.env().n_env()};
    const std::size_t keep[] = {1};
    auto brute = partial_trace(tripartite_state(state, t), dims, keep);
    return max_abs_diff(brute.matrix(), reduced_macro_state(state, t).matrix());
}

double classicality(const TriDecomposedState &state, double t) {
    double worst = 0;
    for (std::size_t k = 0; k < state.m_dim(); ++k) {
        for (std::size_t kp = k + 1; kp < state.m_dim(); ++kp) {
            double overlap = std::abs(inner(state.s_vectors()[kp], state.s_vectors()[k]));
            worst = std::max(worst, std::abs(decoherence_factor(state.env(), k, kp, t)) * overlap);
        }
    }
    return worst;
}

EmergentAlgebra emergent_boolean_algebra(const TriDecomposedState &state, double t, double threshold) {
    if (!(threshold > 0 && threshold < 1)) {
        throw InvariantError("emergent_boolean_algebra: threshold must lie in (0, 1)");
    }
    EmergentAlgebra out;
    out.classicality = classicality(state, t);
    if (out.classicality < threshold) {
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < state.m_dim(); ++k) {
            labels.push_back("M" + std::to_string(k));
        }
        out.pointer_pvm = PVM::from_basis("pointer", ComplexMatrix::identity(state.m_dim()), std::move(labels));
    }
    return out;
}

SweepTable decoherence_sweep(const TriDecomposedState &state, std::span<const double> t_grid, unsigned threads) {
    if (t_grid.empty()) {
        throw InvariantError("decoherence_sweep: empty time grid");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!std::isfinite(t_grid[i])) {
            throw InvariantError("decoherence_sweep: non-finite time");
        }
        if (i > 0 && t_grid[i] < t_grid[i - 1]) {
            throw InvariantError("decoherence_sweep: time grid is not ascending");
        }
    }
    SweepTable table;
    for (std::size_t k = 0; k < state.m_dim(); ++k) {
        for (std::size_t kp = k + 1; kp < state.m_dim(); ++kp) {
            table.pairs.emplace_back(k, kp);
        }
    }
    table.rows.resize(t_grid.size());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(t_grid.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            table.rows[i] = sweep_row(state, table.pairs, t_grid[i]);
        }
        return table;
    }
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < t_grid.size(); i += threads) {
                table.rows[i] = sweep_row(state, table.pairs, t_grid[i]);
            }
        });
    }
    for (auto &worker : workers) {
        worker.join();
    }
    return table;
}

EnvironmentSpec random_environment(std::size_t m_dim, std::size_t n_env, double coupling_scale, Rng &rng) {
    std::vector<Complex> gamma(n_env);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n_env));
    for (auto &g : gamma) {
        g = std::polar(amp, 2 * std::numbers::pi * uniform01(rng));
    }
    // Exact renormalization keeps the 1e-12 gamma invariant for large n_env.
    double norm = 0;
    for (auto g : gamma) {
        norm += std::norm(g);
    }
    for (auto &g : gamma) {
        g /= std::sqrt(norm);
    }
    std::vector<std::vector<double>> couplings(m_dim, std::vector<double>(n_env));
    for (auto &row : couplings) {
        for (auto &g : row) {
            g = coupling_scale * uniform01(rng);
        }
    }
    return EnvironmentSpec(std::move(gamma), std::move(couplings));
}

}  // namespace qkin
