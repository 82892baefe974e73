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

/// Micro/macro/environment model with a pointer-diagonal interaction
///
///   H = sum_{k,nu} g_{k nu} |M_k><M_k| (x) |e_nu><e_nu|,
///
/// under which only the environment factor moves:
///
///   |psi(t)> = sum_k c_k |s_k>|M_k>|eps_k(t)>,
///   |eps_k(t)> = sum_nu gamma_nu exp(-i g_{k nu} t) |e_nu>.
///
/// The decoherence factor is zeta_{kk'}(t) = sum_nu |gamma_nu|^2
/// exp(i (g_{k' nu} - g_{k nu}) t), which equals <eps_k'(t)|eps_k(t)>
/// with the inner product conjugate-linear in its first slot. Couplings are
/// in rad/s and t in seconds.
///
/// Tripartite ordering is system (x) macro (x) environment.

#ifndef QKIN_DECOHERENCE_H
#define QKIN_DECOHERENCE_H

#include <optional>
#include <utility>
#include <vector>

#include "qkin/event_space.h"
#include "qkin/linalg.h"
#include "qkin/random.h"

namespace qkin {

class EnvironmentSpec {
   public:
    /// couplings[k][nu]. Throws InvariantError unless sum |gamma|^2 = 1
    /// within 1e-12 and couplings are finite; DimensionError on ragged rows.
    EnvironmentSpec(std::vector<Complex> gamma, std::vector<std::vector<double>> couplings);

    std::size_t n_env() const { return gamma_.size(); }
    std::size_t pointer_count() const { return couplings_.size(); }
    const std::vector<Complex> &gamma() const { return gamma_; }
    const std::vector<std::vector<double>> &couplings() const { return couplings_; }

   private:
    std::vector<Complex> gamma_;
    std::vector<std::vector<double>> couplings_;
};

class TriDecomposedState {
   public:
    /// Throws InvariantError unless sum |c_k|^2 = 1 within 1e-12;
    /// DimensionError unless |c| = |s_vectors| = couplings row count and all
    /// s_k share a dimension.
    TriDecomposedState(std::vector<Complex> c, std::vector<StateVector> s_vectors, EnvironmentSpec env);

    std::size_t m_dim() const { return c_.size(); }
    std::size_t system_dim() const { return s_vectors_.front().dim(); }
    const std::vector<Complex> &c() const { return c_; }
    const std::vector<StateVector> &s_vectors() const { return s_vectors_; }
    const EnvironmentSpec &env() const { return env_; }

    /// system * macro * environment dimension.
    std::size_t total_dim() const { return system_dim() * m_dim() * env_.n_env(); }

   private:
    std::vector<Complex> c_;
    std::vector<StateVector> s_vectors_;
    EnvironmentSpec env_;
};

/// Diagonal operator on macro (x) environment with entries g_{k nu} in
/// lexicographic (k, nu) order.
ComplexMatrix build_interaction_hamiltonian(const EnvironmentSpec &env, std::size_t m_dim);

/// sum_k m_k |M_k><M_k| (x) I_env.
ComplexMatrix pointer_observable(std::span<const double> values, std::size_t n_env);

StateVector evolve_environment(const EnvironmentSpec &env, std::size_t k, double t);

Complex decoherence_factor(const EnvironmentSpec &env, std::size_t k, std::size_t k_prime, double t);

/// Closed form rho_{kk'} = c_k conj(c_k') <s_k'|s_k> zeta_{kk'}(t).
DensityOperator reduced_macro_state(const TriDecomposedState &state, double t);

/// Explicit |psi(t)> on system (x) macro (x) environment. Throws
/// DimensionError above tolerances().max_crosscheck_dim.
StateVector tripartite_state(const TriDecomposedState &state, double t);

/// Max-entry distance between the closed form and the partial trace of the
/// explicit tripartite state, or nullopt when the tripartite space is larger
/// than tolerances().max_crosscheck_dim.
std::optional<double> reduced_state_crosscheck(const TriDecomposedState &state, double t);

/// max_{k != k'} |zeta_{kk'}(t)| * |<s_k'|s_k>|; zero for a single pointer state.
double classicality(const TriDecomposedState &state, double t);

struct EmergentAlgebra {
    double classicality = 0;
    /// Pointer PVM {|M_k><M_k|}, present when classicality < threshold.
    std::optional<PVM> pointer_pvm;
};

/// Throws std::invalid_argument unless 0 < threshold < 1.
EmergentAlgebra emergent_boolean_algebra(const TriDecomposedState &state, double t, double threshold);

struct SweepRow {
    double t = 0;
    std::vector<double> abs_zeta;  // one per pair in SweepTable::pairs
    double classicality = 0;
};

struct SweepTable {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // k < k'
    std::vector<SweepRow> rows;
};

/// One row per grid time, in grid order. Rows are independent; with
/// `threads` > 1 they are computed in parallel. Throws
/// std::invalid_argument on an empty, non-finite or descending grid.
SweepTable decoherence_sweep(const TriDecomposedState &state, std::span<const double> t_grid,
                             unsigned threads = 1);

/// Environment with uniform |gamma_nu|^2 = 1/n_env (random phases) and
/// couplings drawn uniformly from [0, coupling_scale).
EnvironmentSpec random_environment(std::size_t m_dim, std::size_t n_env, double coupling_scale, Rng &rng);

}  // namespace qkin

#endif
