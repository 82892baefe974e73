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

#ifndef QKIN_CONFIG_H
#define QKIN_CONFIG_H

#include <cstddef>

namespace qkin {

/// Numerical tolerances and size limits shared by every module.
///
/// All checks in the library read from `tolerances()`; nothing hard-codes
/// its own threshold.
struct Tolerances {
    // Type invariants.
    double unit_norm = 1e-12;
    double hermitian = 1e-12;
    double unit_trace = 1e-12;
    double psd_eigenvalue = -1e-10;
    double schmidt = 1e-10;

    // Jacobi eigensolver.
    double jacobi_off_diagonal = 1e-12;
    int jacobi_max_sweeps = 100;

    // Projectors and PVMs.
    double idempotent = 1e-10;
    double projector_rank = 1e-8;
    double pvm_orthogonal = 1e-10;
    double pvm_complete = 1e-10;
    double pvm_membership = 1e-10;
    double gram_min_eigenvalue = 1e-8;

    // Probabilities.
    double probability_band = 1e-10;
    double additivity = 1e-9;
    double noncontextuality = 1e-10;
    double no_signaling = 1e-9;
    double steering_weights = 1e-10;

    // Conditionalization.
    double min_event_probability = 1e-12;
    double support_cutoff = 1e-8;

    // Decoherence.
    double decoherence_threshold = 1e-3;

    // Tomography: a projection onto the state cone that moves the
    // least-squares estimate farther than this (trace distance) is flagged.
    double max_projection_distance = 1.0;

    // Size limits.
    std::size_t max_tensor_dim = 1u << 16;
    std::size_t max_crosscheck_dim = 4096;
    std::size_t max_fiducial_dim = 8;
    std::size_t max_product_atoms = 1u << 22;
};

const Tolerances& tolerances();

}  // namespace qkin

#endif
