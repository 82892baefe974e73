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

#include "qkin/infoloss.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "qkin/conditionalization.h"
#include "qkin/config.h"
#include "qkin/errors.h"
#include "qkin/random.h"

namespace qkin {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// Real symmetric matrix of the stacked element coordinates: A^T A.
ComplexMatrix frame_operator(std::span<const PVM> observables, std::size_t dim) {
    const std::size_t n = dim * dim;
    ComplexMatrix s(n, n);
    for (const auto &pvm : observables) {
        if (pvm.dim() != dim) {
            throw DimensionError("fiducial observable '" + pvm.label() + "' has dimension " +
                                 std::to_string(pvm.dim()) + ", expected " + std::to_string(dim));
        }
        for (const auto &p : pvm.elements()) {
            auto x = hermitian_coordinates(p.matrix());
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    s(i, j) += x[i] * x[j];
                }
            }
        }
    }
    return s;
}

void require_shaped_by(const ProbabilityTable &table, const FiducialSet &f) {
    const auto &obs = table.observables();
    if (obs.size() != f.observables().size()) {
        throw DimensionError("table has " + std::to_string(obs.size()) + " observables, fiducial set has " +
                             std::to_string(f.observables().size()));
    }
    for (std::size_t m = 0; m < obs.size(); ++m) {
        if (obs[m].probabilities.size() != f.observables()[m].size()) {
            throw DimensionError("table row '" + obs[m].label + "' has " +
                                 std::to_string(obs[m].probabilities.size()) + " outcomes, observable has " +
                                 std::to_string(f.observables()[m].size()));
        }
    }
}

ProbabilityTable table_from_counts(const FiducialSet &f, const std::vector<std::vector<std::uint64_t>> &counts,
                                   Provenance provenance);

}  // namespace

// ---------------------------------------------------------------------------
// Hermitian coordinates and completeness

std::vector<double> hermitian_coordinates(const ComplexMatrix &h) {
    if (!h.is_square()) {
        throw DimensionError("hermitian_coordinates: non-square matrix");
    }
    const std::size_t d = h.rows();
    std::vector<double> x;
    x.reserve(d * d);
    for (std::size_t j = 0; j < d; ++j) {
        x.push_back(h(j, j).real());
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j + 1; k < d; ++k) {
            x.push_back(std::sqrt(2.0) * h(j, k).real());
            x.push_back(std::sqrt(2.0) * h(j, k).imag());
        }
    }
    return x;
}

ComplexMatrix hermitian_from_coordinates(std::span<const double> x, std::size_t dim) {
    if (x.size() != dim * dim) {
        throw DimensionError("hermitian_from_coordinates: " + std::to_string(x.size()) + " coordinates for dimension " +
                             std::to_string(dim));
    }
    ComplexMatrix h(dim, dim);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < dim; ++j) {
        h(j, j) = x[idx++];
    }
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t k = j + 1; k < dim; ++k) {
            double re = x[idx++] * kSqrtHalf;
            double im = x[idx++] * kSqrtHalf;
            h(j, k) = Complex(re, im);
            h(k, j) = Complex(re, -im);
        }
    }
    return h;
}

std::size_t completeness_rank(std::span<const PVM> observables, std::size_t dim) {
    if (observables.empty()) {
        return 0;
    }
    auto eig = hermitian_eig(frame_operator(observables, dim));
    return static_cast<std::size_t>(std::count_if(eig.values.begin(), eig.values.end(), [](double v) {
        return v > tolerances().gram_min_eigenvalue;
    }));
}

FiducialSet::FiducialSet(std::vector<PVM> observables) : observables_(std::move(observables)) {
    if (observables_.empty()) {
        throw InvariantError("FiducialSet: no observables");
    }
    const std::size_t d = observables_.front().dim();
    std::size_t rank = completeness_rank(observables_, d);
    if (rank != d * d) {
        throw InvariantError("FiducialSet: not informationally complete (rank " + std::to_string(rank) + " < " +
                             std::to_string(d * d) + ")");
    }
}

FiducialSet qubit_fiducial_set() {
    const double r = kSqrtHalf;
    const Complex i(0, 1);
    ComplexMatrix z = ComplexMatrix::identity(2);
    ComplexMatrix x(2, 2, {r, r, r, -r});
    ComplexMatrix y(2, 2, {r, r, i * r, -i * r});
    std::vector<PVM> obs{PVM::from_basis("Z", z, {"+", "-"}), PVM::from_basis("X", x, {"+", "-"}),
                         PVM::from_basis("Y", y, {"+", "-"})};
    return FiducialSet(std::move(obs));
}

FiducialSet general_fiducial_set(std::size_t d) {
    if (d < 2 || d > tolerances().max_fiducial_dim) {
        throw DimensionError("general_fiducial_set: dimension " + std::to_string(d) + " outside [2, " +
                             std::to_string(tolerances().max_fiducial_dim) + "]");
    }
    std::vector<PVM> obs{PVM::from_basis("basis", ComplexMatrix::identity(d))};
    const Complex i(0, 1);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = j + 1; k < d; ++k) {
            for (int imaginary = 0; imaginary < 2; ++imaginary) {
                Complex phase = imaginary ? i : Complex(1.0);
                // Columns j and k become the +/- superpositions; others stay put.
                ComplexMatrix u = ComplexMatrix::identity(d);
                u(j, j) = kSqrtHalf;
                u(k, j) = kSqrtHalf * phase;
                u(j, k) = kSqrtHalf;
                u(k, k) = -kSqrtHalf * phase;
                std::string label = std::string(imaginary ? "imag_" : "real_") + std::to_string(j) + "_" +
                                    std::to_string(k);
                obs.push_back(PVM::from_basis(std::move(label), u));
            }
        }
    }
    return FiducialSet(std::move(obs));
}

// ---------------------------------------------------------------------------
// Statistics

ProbabilityTable::ProbabilityTable(std::vector<ObservableStatistics> observables, Provenance provenance)
    : observables_(std::move(observables)), provenance_(provenance) {
    for (const auto &o : observables_) {
        if (o.probabilities.empty() || o.outcomes.size() != o.probabilities.size()) {
            throw DimensionError("ProbabilityTable: row '" + o.label + "' has mismatched outcomes");
        }
        double sum = 0;
        for (double p : o.probabilities) {
            if (!(p >= 0) || p > 1) {
                throw InvariantError("ProbabilityTable: row '" + o.label + "' has a probability outside [0, 1]");
            }
            sum += p;
        }
        if (provenance_.kind == Provenance::Kind::exact) {
            if (std::abs(sum - 1.0) > 1e-9) {
                throw InvariantError("ProbabilityTable: row '" + o.label + "' sums to " + std::to_string(sum));
            }
            continue;
        }
        if (o.counts.size() != o.probabilities.size()) {
            throw InvariantError("ProbabilityTable: sampled row '" + o.label + "' without counts");
        }
        std::uint64_t total = std::accumulate(o.counts.begin(), o.counts.end(), std::uint64_t{0});
        if (total == 0 || (provenance_.n != 0 && total != provenance_.n)) {
            throw InvariantError("ProbabilityTable: sampled row '" + o.label + "' has " + std::to_string(total) +
                                 " draws");
        }
        for (std::size_t a = 0; a < o.counts.size(); ++a) {
            if (o.probabilities[a] != static_cast<double>(o.counts[a]) / static_cast<double>(total)) {
                throw InvariantError("ProbabilityTable: sampled row '" + o.label + "' is not its empirical frequency");
            }
        }
    }
}

ProbabilityTable exact_statistics(const DensityOperator &rho, const FiducialSet &f) {
    if (rho.dim() != f.dim()) {
        throw DimensionError("exact_statistics: state dimension " + std::to_string(rho.dim()) +
                             ", fiducial dimension " + std::to_string(f.dim()));
    }
    std::vector<ObservableStatistics> rows;
    for (const auto &pvm : f.observables()) {
        rows.push_back({pvm.label(), pvm.outcome_labels(), born_distribution(rho, pvm), {}});
    }
    return ProbabilityTable(std::move(rows), Provenance{});
}

namespace {

ProbabilityTable table_from_counts(const FiducialSet &f, const std::vector<std::vector<std::uint64_t>> &counts,
                                   Provenance provenance) {
    std::vector<ObservableStatistics> rows;
    for (std::size_t m = 0; m < f.observables().size(); ++m) {
        const auto &pvm = f.observables()[m];
        ObservableStatistics row{pvm.label(), pvm.outcome_labels(), {}, counts[m]};
        std::uint64_t total = std::accumulate(counts[m].begin(), counts[m].end(), std::uint64_t{0});
        for (auto c : counts[m]) {
            row.probabilities.push_back(static_cast<double>(c) / static_cast<double>(total));
        }
        rows.push_back(std::move(row));
    }
    return ProbabilityTable(std::move(rows), provenance);
}

}  // namespace

ProbabilityTable sampled_statistics(const DensityOperator &rho, const FiducialSet &f, std::uint64_t n,
                                    std::uint64_t seed) {
    if (n == 0) {
        throw InvariantError("sampled_statistics: n must be at least 1");
    }
    if (rho.dim() != f.dim()) {
        throw DimensionError("sampled_statistics: state dimension " + std::to_string(rho.dim()) +
                             ", fiducial dimension " + std::to_string(f.dim()));
    }
    std::vector<std::vector<std::uint64_t>> counts;
    for (std::size_t m = 0; m < f.observables().size(); ++m) {
        auto probs = born_distribution(rho, f.observables()[m]);
        Rng rng(derive_seed(seed, m));
        std::vector<std::uint64_t> c(probs.size(), 0);
        for (std::uint64_t draw = 0; draw < n; ++draw) {
            ++c[sample_categorical(probs, rng)];
        }
        counts.push_back(std::move(c));
    }
    return table_from_counts(f, counts, Provenance{Provenance::Kind::sampled, n, seed});
}

// ---------------------------------------------------------------------------
// Reconstruction

Reconstruction reconstruct_state_detailed(const ProbabilityTable &table, const FiducialSet &f) {
    require_shaped_by(table, f);
    const std::size_t d = f.dim();
    const std::size_t n = d * d;

    std::vector<double> rhs(n, 0.0);
    for (std::size_t m = 0; m < f.observables().size(); ++m) {
        const auto &pvm = f.observables()[m];
        for (std::size_t a = 0; a < pvm.size(); ++a) {
            auto x = hermitian_coordinates(pvm.elements()[a].matrix());
            double p = table.observables()[m].probabilities[a];
            for (std::size_t i = 0; i < n; ++i) {
                rhs[i] += x[i] * p;
            }
        }
    }
    auto eig = hermitian_eig(frame_operator(f.observables(), d));
    if (eig.values.front() <= tolerances().gram_min_eigenvalue) {
        throw InvariantError("reconstruct_state: fiducial set is rank deficient");
    }
    // x = V diag(1/lambda) V^T rhs.
    std::vector<double> solution(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double proj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            proj += eig.vectors(i, k).real() * rhs[i];
        }
        proj /= eig.values[k];
        for (std::size_t i = 0; i < n; ++i) {
            solution[i] += proj * eig.vectors(i, k).real();
        }
    }
    ComplexMatrix estimate = hermitian_from_coordinates(solution, d);

    auto spectrum = hermitian_eig(estimate);
    double kept = 0;
    for (double v : spectrum.values) {
        kept += std::max(v, 0.0);
    }
    if (!(kept > 0)) {
        throw InvariantError("reconstruct_state: estimate has no positive eigenvalue");
    }
    ComplexMatrix projected(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        double w = std::max(spectrum.values[k], 0.0) / kept;
        if (w == 0) {
            continue;
        }
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                projected(r, c) += w * spectrum.vectors(r, k) * std::conj(spectrum.vectors(c, k));
            }
        }
    }
    projected = hermitian_part(projected);
    projected *= Complex(1.0 / projected.trace().real());
    DensityOperator state(std::move(projected));

    auto diff = hermitian_eig(hermitian_part(estimate - state.matrix()));
    double distance = 0;
    for (double v : diff.values) {
        distance += 0.5 * std::abs(v);
    }
    bool flagged = distance > tolerances().max_projection_distance;
    return {std::move(state), distance, flagged};
}

DensityOperator reconstruct_state(const ProbabilityTable &table, const FiducialSet &f) {
    auto r = reconstruct_state_detailed(table, f);
    if (r.flagged) {
        throw InvariantError("reconstruct_state: infeasible table (projection moved the estimate by " +
                             std::to_string(r.projection_distance) + ")");
    }
    return std::move(r.state);
}

// ---------------------------------------------------------------------------
// Product measure

std::vector<double> ClassicalJoint::marginal(std::size_t observable) const {
    if (observable >= shape.size()) {
        throw DimensionError("ClassicalJoint::marginal: observable index out of range");
    }
    std::size_t inner = 1;
    for (std::size_t m = observable + 1; m < shape.size(); ++m) {
        inner *= shape[m];
    }
    std::vector<double> out(shape[observable], 0.0);
    for (std::size_t atom = 0; atom < probabilities.size(); ++atom) {
        out[(atom / inner) % shape[observable]] += probabilities[atom];
    }
    return out;
}

ClassicalJoint product_measure(const ProbabilityTable &table) {
    ClassicalJoint joint;
    std::size_t atoms = 1;
    for (const auto &o : table.observables()) {
        std::size_t k = o.probabilities.size();
        if (atoms > tolerances().max_product_atoms / k) {
            throw DimensionError("product_measure: outcome space exceeds " +
                                 std::to_string(tolerances().max_product_atoms) + " atoms");
        }
        atoms *= k;
        joint.shape.push_back(k);
    }
    joint.probabilities.assign(1, 1.0);
    for (const auto &o : table.observables()) {
        std::vector<double> next;
        next.reserve(joint.probabilities.size() * o.probabilities.size());
        for (double p : joint.probabilities) {
            for (double q : o.probabilities) {
                next.push_back(p * q);
            }
        }
        joint.probabilities = std::move(next);
    }
    return joint;
}

// ---------------------------------------------------------------------------
// Measure -> prepare

PipelineReport measure_prepare_pipeline(const DensityOperator &source, const FiducialSet &f, std::uint64_t n,
                                        std::uint64_t seed, unsigned threads) {
    if (n == 0) {
        throw InvariantError("measure_prepare_pipeline: n must be at least 1");
    }
    if (source.dim() != f.dim()) {
        throw DimensionError("measure_prepare_pipeline: source dimension " + std::to_string(source.dim()) +
                             ", fiducial dimension " + std::to_string(f.dim()));
    }
    const auto &obs = f.observables();
    const std::size_t m_count = obs.size();

    std::vector<std::vector<double>> probs;
    std::vector<DensityOperator> dephased;
    std::vector<double> dephased_distance;
    std::vector<std::vector<double>> posterior_distance;
    for (const auto &pvm : obs) {
        probs.push_back(born_distribution(source, pvm));
        dephased.push_back(dephase(source, pvm));
        dephased_distance.push_back(trace_distance(source, dephased.back()));
        std::vector<double> per_outcome;
        for (std::size_t a = 0; a < pvm.size(); ++a) {
            if (probs.back()[a] > tolerances().min_event_probability) {
                per_outcome.push_back(trace_distance(source, luders_update(source, pvm.elements()[a]).posterior));
            } else {
                per_outcome.push_back(0.0);
            }
        }
        posterior_distance.push_back(std::move(per_outcome));
    }

    // Per-thread counts, merged afterwards; each copy's draws depend only on
    // (seed, copy index).
    threads = std::max(1u, threads);
    std::vector<std::vector<std::vector<std::uint64_t>>> partial(threads);
    auto run = [&](unsigned w) {
        auto &counts = partial[w];
        counts.assign(m_count, {});
        for (std::size_t m = 0; m < m_count; ++m) {
            counts[m].assign(obs[m].size(), 0);
        }
        for (std::uint64_t copy = w; copy < n; copy += threads) {
            Rng rng(derive_seed(seed, copy));
            auto m = std::min<std::size_t>(m_count - 1, static_cast<std::size_t>(uniform01(rng) * m_count));
            ++counts[m][sample_categorical(probs[m], rng)];
        }
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back(run, w);
        }
        for (auto &worker : workers) {
            worker.join();
        }
    }
    std::vector<std::vector<std::uint64_t>> counts = partial[0];
    for (unsigned w = 1; w < threads; ++w) {
        for (std::size_t m = 0; m < m_count; ++m) {
            for (std::size_t a = 0; a < counts[m].size(); ++a) {
                counts[m][a] += partial[w][m][a];
            }
        }
    }

    double disturbance = 0, selective = 0;
    std::vector<std::uint64_t> per_observable(m_count, 0);
    std::size_t unmeasured = 0;
    std::vector<ObservableStatistics> rows;
    for (std::size_t m = 0; m < m_count; ++m) {
        for (std::size_t a = 0; a < counts[m].size(); ++a) {
            per_observable[m] += counts[m][a];
            selective += static_cast<double>(counts[m][a]) * posterior_distance[m][a];
        }
        disturbance += static_cast<double>(per_observable[m]) * dephased_distance[m];
        ObservableStatistics row{obs[m].label(), obs[m].outcome_labels(), {}, counts[m]};
        if (per_observable[m] == 0) {
            ++unmeasured;
            row.probabilities.assign(obs[m].size(), 1.0 / static_cast<double>(obs[m].size()));
            row.counts.assign(obs[m].size(), 1);
        } else {
            for (auto c : counts[m]) {
                row.probabilities.push_back(static_cast<double>(c) / static_cast<double>(per_observable[m]));
            }
        }
        rows.push_back(std::move(row));
    }
    // Rows hold different copy counts, so the table's n is left unconstrained.
    ProbabilityTable table(std::move(rows), Provenance{Provenance::Kind::sampled, 0, seed});
    auto clone = reconstruct_state_detailed(table, f);

    PipelineReport report{clone.state, dephased,   per_observable,
                          disturbance / static_cast<double>(n),
                          selective / static_cast<double>(n),
                          fidelity(source, clone.state),
                          trace_distance(source, clone.state),
                          unmeasured,
                          clone.flagged,
                          std::move(table)};
    return report;
}

double tensor_power_overlap(const StateVector &e, const StateVector &f, unsigned n) {
    if (n == 0) {
        throw InvariantError("tensor_power_overlap: n must be at least 1");
    }
    return std::pow(transition_probability(e, f), static_cast<double>(n));
}

}  // namespace qkin
