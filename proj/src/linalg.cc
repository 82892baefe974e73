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

#include "qkin/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qkin/config.h"
#include "qkin/errors.h"

namespace qkin {

const Tolerances &tolerances() {
    static const Tolerances defaults{};
    return defaults;
}

namespace {

std::string shape(const ComplexMatrix &m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape " + shape(a) + " vs " + shape(b));
    }
}

double norm_of(std::span<const Complex> v) {
    double s = 0;
    for (auto z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

// Multiplies column c by a unit phase so that its first entry with
// magnitude above 1e-8 is real and positive.
void fix_column_phase(ComplexMatrix &m, std::size_t c) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double a = std::abs(m(r, c));
        if (a > 1e-8) {
            Complex phase = std::conj(m(r, c)) / a;
            for (std::size_t k = 0; k < m.rows(); ++k) {
                m(k, c) *= phase;
            }
            m(r, c) = a;
            return;
        }
    }
}

bool lexicographically_less(std::span<const Complex> a, std::span<const Complex> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) {
            return a[i].real() < b[i].real();
        }
        if (a[i].imag() != b[i].imag()) {
            return a[i].imag() < b[i].imag();
        }
    }
    return false;
}

// Removes the components of `w` along the first `count` columns of `basis`
// (assumed orthonormal). Two passes.
void orthogonalize_against(std::vector<Complex> &w, const ComplexMatrix &basis, std::size_t count) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < count; ++j) {
            Complex proj = 0;
            for (std::size_t r = 0; r < basis.rows(); ++r) {
                proj += std::conj(basis(r, j)) * w[r];
            }
            for (std::size_t r = 0; r < basis.rows(); ++r) {
                w[r] -= proj * basis(r, j);
            }
        }
    }
}

// Fills column `col` of `basis` with a unit vector orthogonal to the
// columns before it, drawn from the canonical basis.
void complete_column(ComplexMatrix &basis, std::size_t col) {
    std::size_t n = basis.rows();
    std::vector<Complex> best;
    double best_norm = -1;
    for (std::size_t e = 0; e < n; ++e) {
        std::vector<Complex> w(n, 0.0);
        w[e] = 1.0;
        orthogonalize_against(w, basis, col);
        double nw = norm_of(w);
        if (nw > best_norm + 1e-12) {
            best_norm = nw;
            best = std::move(w);
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        basis(r, col) = best[r] / best_norm;
    }
}

struct IndexSplit {
    std::size_t kept_dim = 1;
    std::size_t traced_dim = 1;
    // flat[k * traced_dim + t] = full flat index for kept index k, traced index t.
    std::vector<std::size_t> flat;
};

IndexSplit split_indices(std::span<const std::size_t> dims, std::span<const std::size_t> keep_in,
                         std::size_t total) {
    if (dims.empty()) {
        throw DimensionError("partial_trace: empty dims");
    }
    std::size_t product = 1;
    for (auto d : dims) {
        if (d == 0) {
            throw DimensionError("partial_trace: zero subsystem dimension");
        }
        product *= d;
    }
    if (product != total) {
        throw DimensionError("partial_trace: dims multiply to " + std::to_string(product) +
                             " but operator dimension is " + std::to_string(total));
    }
    std::vector<std::size_t> keep(keep_in.begin(), keep_in.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.empty()) {
        throw DimensionError("partial_trace: keep set is empty");
    }
    if (keep.back() >= dims.size()) {
        throw DimensionError("partial_trace: subsystem index " + std::to_string(keep.back()) +
                             " out of range");
    }
    std::vector<bool> is_kept(dims.size(), false);
    for (auto k : keep) {
        is_kept[k] = true;
    }

    IndexSplit out;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        (is_kept[s] ? out.kept_dim : out.traced_dim) *= dims[s];
    }
    out.flat.resize(total);
    std::vector<std::size_t> digits(dims.size(), 0);
    for (std::size_t full = 0; full < total; ++full) {
        std::size_t k = 0, t = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            if (is_kept[s]) {
                k = k * dims[s] + digits[s];
            } else {
                t = t * dims[s] + digits[s];
            }
        }
        out.flat[k * out.traced_dim + t] = full;
        for (std::size_t s = dims.size(); s-- > 0;) {
            if (++digits[s] < dims[s]) {
                break;
            }
            digits[s] = 0;
        }
    }
    return out;
}

// Removes floating-point asymmetry and trace drift that survive products of
// valid operators before re-validation.
DensityOperator finalize_density(ComplexMatrix m) {
    m = hermitian_part(m);
    double tr = m.trace().real();
    if (tr > 0) {
        m *= Complex(1.0 / tr);
    }
    return DensityOperator(std::move(m));
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) + " entries for a " +
                             std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    }
    for (auto z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvariantError("ComplexMatrix: non-finite entry");
        }
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> values) {
    return ComplexMatrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) {
        throw DimensionError("trace of non-square " + shape(*this) + " matrix");
    }
    Complex t = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0;
    for (auto z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double ComplexMatrix::frobenius_norm() const { return norm_of(data_); }

std::vector<Complex> ComplexMatrix::column_vector(std::size_t c) const {
    std::vector<Complex> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        v[r] = (*this)(r, c);
    }
    return v;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix sum");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix difference");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : data_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }
ComplexMatrix operator*(double scale, ComplexMatrix m) { return m *= Complex(scale); }

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product: " + shape(a) + " * " + shape(b));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex ark = a(r, k);
            if (ark == Complex(0.0)) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

double hermiticity_error(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw DimensionError("hermiticity of non-square " + shape(m) + " matrix");
    }
    double e = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r; c < m.cols(); ++c) {
            e = std::max(e, std::abs(m(r, c) - std::conj(m(c, r))));
        }
    }
    return e;
}

ComplexMatrix hermitian_part(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw DimensionError("hermitian part of non-square " + shape(m) + " matrix");
    }
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < m.cols(); ++c) {
            Complex z = 0.5 * (m(r, c) + std::conj(m(c, r)));
            out(r, c) = z;
            out(c, r) = std::conj(z);
        }
    }
    return out;
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    std::size_t rows = a.rows() * b.rows();
    std::size_t cols = a.cols() * b.cols();
    std::size_t cap = tolerances().max_tensor_dim;
    if (rows > cap || cols > cap) {
        throw DimensionError("tensor_product: result " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " exceeds maximum dimension " +
                             std::to_string(cap));
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw DimensionError("StateVector: zero dimension");
    }
    for (auto z : amplitudes_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvariantError("StateVector: non-finite amplitude");
        }
    }
    double n = norm_of(amplitudes_);
    if (std::abs(n - 1.0) > tolerances().unit_norm) {
        throw InvariantError("StateVector: norm " + std::to_string(n) + " is not 1");
    }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    double n = norm_of(amplitudes);
    if (!(n > 0) || !std::isfinite(n)) {
        throw InvariantError("StateVector::normalized: zero or non-finite vector");
    }
    for (auto &z : amplitudes) {
        z /= n;
    }
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("StateVector::basis: index " + std::to_string(index) +
                             " out of range for dimension " + std::to_string(dim));
    }
    std::vector<Complex> v(dim, 0.0);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

ComplexMatrix StateVector::as_column() const { return ComplexMatrix::column(amplitudes_); }

ComplexMatrix StateVector::outer() const {
    ComplexMatrix m(dim(), dim());
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            m(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
        }
    }
    return m;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionError("inner product: dimensions " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    }
    Complex s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

Complex inner(const StateVector &a, const StateVector &b) {
    return inner(a.amplitudes(), b.amplitudes());
}

StateVector tensor_product(const StateVector &a, const StateVector &b) {
    if (a.dim() * b.dim() > tolerances().max_tensor_dim) {
        throw DimensionError("tensor_product: state dimension exceeds maximum");
    }
    std::vector<Complex> v;
    v.reserve(a.dim() * b.dim());
    for (auto x : a.amplitudes()) {
        for (auto y : b.amplitudes()) {
            v.push_back(x * y);
        }
    }
    return StateVector::normalized(std::move(v));
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    const auto &tol = tolerances();
    if (!matrix_.is_square() || matrix_.rows() == 0) {
        throw DimensionError("DensityOperator: matrix must be square and nonempty");
    }
    double herm = hermiticity_error(matrix_);
    if (herm > tol.hermitian) {
        throw InvariantError("DensityOperator: not Hermitian (error " + std::to_string(herm) + ")");
    }
    Complex tr = matrix_.trace();
    if (std::abs(tr - Complex(1.0)) > tol.unit_trace) {
        throw InvariantError("DensityOperator: trace " + std::to_string(tr.real()) + " is not 1");
    }
    auto eig = hermitian_eig(matrix_);
    if (eig.values.front() < tol.psd_eigenvalue) {
        throw InvariantError("DensityOperator: negative eigenvalue " +
                             std::to_string(eig.values.front()));
    }
}

DensityOperator DensityOperator::pure(const StateVector &psi) {
    return DensityOperator(psi.outer(), Unchecked{});
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    if (dim == 0) {
        throw DimensionError("maximally_mixed: zero dimension");
    }
    return DensityOperator((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim),
                           Unchecked{});
}

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenDecomposition hermitian_eig(const ComplexMatrix &h) {
    const auto &tol = tolerances();
    if (!h.is_square()) {
        throw DimensionError("hermitian_eig: non-square " + shape(h) + " matrix");
    }
    double scale = std::max(1.0, h.max_abs());
    if (hermiticity_error(h) > tol.hermitian * scale) {
        throw InvariantError("hermitian_eig: input is not Hermitian");
    }
    const std::size_t n = h.rows();
    ComplexMatrix a = hermitian_part(h);
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double threshold = tol.jacobi_off_diagonal * std::max(1.0, h.frobenius_norm());

    auto off_diagonal = [&] {
        double s = 0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (p != q) {
                    s += std::norm(a(p, q));
                }
            }
        }
        return std::sqrt(s);
    };

    bool converged = false;
    for (int sweep = 0; sweep <= tol.jacobi_max_sweeps; ++sweep) {
        if (off_diagonal() <= threshold) {
            converged = true;
            break;
        }
        if (sweep == tol.jacobi_max_sweeps) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                Complex b = a(p, q);
                double mag = std::abs(b);
                if (mag < 1e-300) {
                    continue;
                }
                // Phase rotation makes the (p, q) element real, then a real
                // Jacobi rotation annihilates it. W acts on columns p and q.
                Complex phase = std::conj(b) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2 * mag);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                const Complex wpp = c, wpq = s, wqp = -s * phase, wqq = c * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * wpp + akq * wqp;
                    a(k, q) = akp * wpq + akq * wqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
                    a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                for (std::size_t k = 0; k < n; ++k) {
                    Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * wpp + vkq * wqp;
                    v(k, q) = vkp * wpq + vkq * wqq;
                }
            }
        }
    }
    if (!converged) {
        throw NumericalError("hermitian_eig: no convergence after " +
                             std::to_string(tol.jacobi_max_sweeps) + " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = a(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, c) = v(r, order[c]);
        }
        fix_column_phase(out.vectors, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVD and Schmidt decomposition

SingularValueDecomposition singular_value_decomposition(const ComplexMatrix &m) {
    if (m.rows() < m.cols()) {
        auto t = singular_value_decomposition(m.adjoint());
        return {std::move(t.values), std::move(t.right), std::move(t.left)};
    }
    const std::size_t rows = m.rows();
    const std::size_t k = m.cols();
    auto eig = hermitian_eig(m.adjoint() * m);

    // Right vectors in order of decreasing eigenvalue; left vectors recovered
    // as M v / |M v|, orthogonalized against the earlier ones.
    ComplexMatrix right(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t r = 0; r < k; ++r) {
            right(r, i) = eig.vectors(r, k - 1 - i);
        }
    }
    ComplexMatrix left(rows, k);
    std::vector<double> values(k, 0.0);
    double largest = 0;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Complex> w(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                w[r] += m(r, c) * right(c, i);
            }
        }
        orthogonalize_against(w, left, i);
        double sigma = norm_of(w);
        largest = std::max(largest, sigma);
        if (sigma > 1e-30 * std::max(1.0, largest)) {
            values[i] = sigma;
            for (std::size_t r = 0; r < rows; ++r) {
                left(r, i) = w[r] / sigma;
            }
        } else {
            values[i] = 0;
            complete_column(left, i);
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
    SingularValueDecomposition out{std::vector<double>(k), ComplexMatrix(rows, k), ComplexMatrix(k, k)};
    for (std::size_t i = 0; i < k; ++i) {
        out.values[i] = values[order[i]];
        for (std::size_t r = 0; r < rows; ++r) {
            out.left(r, i) = left(r, order[i]);
        }
        for (std::size_t r = 0; r < k; ++r) {
            out.right(r, i) = right(r, order[i]);
        }
    }
    return out;
}

std::vector<Complex> SchmidtForm::reconstruct() const {
    if (coefficients.empty()) {
        return {};
    }
    std::size_t da = left_vectors.front().dim();
    std::size_t db = right_vectors.front().dim();
    std::vector<Complex> psi(da * db, 0.0);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        for (std::size_t i = 0; i < da; ++i) {
            for (std::size_t j = 0; j < db; ++j) {
                psi[i * db + j] += coefficients[k] * left_vectors[k][i] * right_vectors[k][j];
            }
        }
    }
    return psi;
}

SchmidtForm schmidt_decompose(const StateVector &psi, std::size_t dim_a, std::size_t dim_b) {
    if (dim_a == 0 || dim_b == 0 || psi.dim() != dim_a * dim_b) {
        throw DimensionError("schmidt_decompose: state dimension " + std::to_string(psi.dim()) +
                             " is not " + std::to_string(dim_a) + "*" + std::to_string(dim_b));
    }
    ComplexMatrix m(dim_a, dim_b, std::vector<Complex>(psi.amplitudes().begin(), psi.amplitudes().end()));
    auto svd = singular_value_decomposition(m);
    const std::size_t k = svd.values.size();

    // psi = sum_k s_k u_k (x) conj(v_k). Fix the phase on u_k and carry the
    // compensating phase on the right factor.
    std::vector<std::vector<Complex>> lefts(k), rights(k);
    for (std::size_t i = 0; i < k; ++i) {
        fix_column_phase(svd.left, i);
        lefts[i] = svd.left.column_vector(i);
        std::vector<Complex> u = lefts[i];
        // conj(v) recovered from the phase-fixed u so that the pair stays consistent.
        std::vector<Complex> r(dim_b, 0.0);
        if (svd.values[i] > 0) {
            for (std::size_t a = 0; a < dim_a; ++a) {
                for (std::size_t b = 0; b < dim_b; ++b) {
                    r[b] += std::conj(u[a]) * m(a, b);
                }
            }
            for (auto &z : r) {
                z /= svd.values[i];
            }
            // Re-normalize away rounding in the division.
            double nr = norm_of(r);
            for (auto &z : r) {
                z /= nr;
            }
        } else {
            for (std::size_t b = 0; b < dim_b; ++b) {
                r[b] = std::conj(svd.right(b, i));
            }
        }
        rights[i] = std::move(r);
    }

    // Deterministic order inside degenerate groups.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    const double tie = tolerances().schmidt;
    for (std::size_t start = 0; start < k;) {
        std::size_t end = start + 1;
        while (end < k && svd.values[start] - svd.values[end] <= tie) {
            ++end;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t i, std::size_t j) { return lexicographically_less(lefts[i], lefts[j]); });
        start = end;
    }

    SchmidtForm out;
    for (std::size_t pos = 0; pos < k; ++pos) {
        // Numerically absent terms are dropped; a product state has one term.
        if (pos > 0 && svd.values[pos] <= tie) {
            break;
        }
        std::size_t i = order[pos];
        // Slot order keeps the list nonincreasing; tied values differ by at most `tie`.
        out.coefficients.push_back(svd.values[pos]);
        out.left_vectors.push_back(StateVector::normalized(lefts[i]));
        out.right_vectors.push_back(StateVector::normalized(rights[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Partial trace and distances

DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep) {
    auto split = split_indices(dims, keep, rho.dim());
    const auto &m = rho.matrix();
    ComplexMatrix out(split.kept_dim, split.kept_dim);
    for (std::size_t i = 0; i < split.kept_dim; ++i) {
        for (std::size_t j = 0; j < split.kept_dim; ++j) {
            Complex s = 0;
            for (std::size_t t = 0; t < split.traced_dim; ++t) {
                s += m(split.flat[i * split.traced_dim + t], split.flat[j * split.traced_dim + t]);
            }
            out(i, j) = s;
        }
    }
    return finalize_density(std::move(out));
}

DensityOperator partial_trace(const StateVector &psi, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep) {
    auto split = split_indices(dims, keep, psi.dim());
    ComplexMatrix out(split.kept_dim, split.kept_dim);
    for (std::size_t i = 0; i < split.kept_dim; ++i) {
        for (std::size_t j = i; j < split.kept_dim; ++j) {
            Complex s = 0;
            for (std::size_t t = 0; t < split.traced_dim; ++t) {
                s += psi[split.flat[i * split.traced_dim + t]] *
                     std::conj(psi[split.flat[j * split.traced_dim + t]]);
            }
            out(i, j) = s;
            out(j, i) = std::conj(s);
        }
    }
    return finalize_density(std::move(out));
}

double trace_distance(const DensityOperator &rho, const DensityOperator &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionError("trace_distance: dimensions " + std::to_string(rho.dim()) + " and " +
                             std::to_string(sigma.dim()));
    }
    auto eig = hermitian_eig(hermitian_part(rho.matrix() - sigma.matrix()));
    double s = 0;
    for (double v : eig.values) {
        s += std::abs(v);
    }
    return std::clamp(0.5 * s, 0.0, 1.0);
}

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionError("fidelity: dimensions " + std::to_string(rho.dim()) + " and " +
                             std::to_string(sigma.dim()));
    }
    auto eig = hermitian_eig(rho.matrix());
    const std::size_t n = rho.dim();
    ComplexMatrix root(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = std::sqrt(std::max(eig.values[k], 0.0));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                root(r, c) += s * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
            }
        }
    }
    auto inner_eig = hermitian_eig(hermitian_part(root * sigma.matrix() * root));
    double s = 0;
    for (double v : inner_eig.values) {
        s += std::sqrt(std::max(v, 0.0));
    }
    return std::clamp(s * s, 0.0, 1.0);
}

}  // namespace qkin
