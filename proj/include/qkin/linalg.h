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

/// Dense complex linear algebra for small Hilbert spaces (dimension up to
/// a few dozen): matrices, kets, density operators, Hermitian
/// eigendecomposition, SVD/Schmidt, partial traces and distances.
///
/// Tensor products use the row-major Kronecker convention: the first factor
/// is the most significant index, so |i>|j> sits at flat index i*dimB + j.

#ifndef QKIN_LINALG_H
#define QKIN_LINALG_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qkin {

using Complex = std::complex<double>;

class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    /// Zero matrix.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Row-major entries; throws DimensionError on a size mismatch and
    /// InvariantError on non-finite entries.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix column(std::span<const Complex> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    std::span<const Complex> entries() const { return data_; }

    Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;
    /// Largest entry magnitude.
    double max_abs() const;
    double frobenius_norm() const;
    std::vector<Complex> column_vector(std::size_t c) const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(double scale, ComplexMatrix m);

/// max_ij |a_ij - b_ij|.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
/// max_ij |m_ij - conj(m_ji)|.
double hermiticity_error(const ComplexMatrix &m);
/// (m + m†) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix &m);
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);

/// Kronecker product. Throws DimensionError if either result dimension
/// exceeds tolerances().max_tensor_dim.
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Unit vector in C^dim.
class StateVector {
   public:
    /// Throws InvariantError unless the norm is 1 within tolerances().unit_norm.
    explicit StateVector(std::vector<Complex> amplitudes);
    /// Rescales to unit norm; throws InvariantError on a zero vector.
    static StateVector normalized(std::vector<Complex> amplitudes);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    ComplexMatrix as_column() const;
    /// |v><v|.
    ComplexMatrix outer() const;

   private:
    std::vector<Complex> amplitudes_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const StateVector &a, const StateVector &b);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
StateVector tensor_product(const StateVector &a, const StateVector &b);

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityOperator {
   public:
    /// Validates hermiticity, trace and eigenvalues; throws InvariantError.
    explicit DensityOperator(ComplexMatrix matrix);
    /// |psi><psi|; positivity holds by construction and is not re-checked.
    static DensityOperator pure(const StateVector &psi);
    static DensityOperator maximally_mixed(std::size_t dim);

    std::size_t dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }

   private:
    struct Unchecked {};
    DensityOperator(ComplexMatrix matrix, Unchecked) : matrix_(std::move(matrix)) {}
    ComplexMatrix matrix_;
};

/// Eigenvalues ascending; eigenvectors are the matching columns of
/// `vectors`, each phase-fixed so its first non-negligible entry is real and
/// positive.
struct EigenDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Throws
/// InvariantError on non-Hermitian input and NumericalError if the
/// off-diagonal mass does not fall below the threshold within the sweep cap.
EigenDecomposition hermitian_eig(const ComplexMatrix &h);

/// m = left * diag(values) * right†; values nonincreasing, k = min(rows, cols)
/// columns in both factors, each family orthonormal.
struct SingularValueDecomposition {
    std::vector<double> values;
    ComplexMatrix left;
    ComplexMatrix right;
};

SingularValueDecomposition singular_value_decomposition(const ComplexMatrix &m);

struct SchmidtForm {
    std::vector<double> coefficients;
    std::vector<StateVector> left_vectors;
    std::vector<StateVector> right_vectors;

    std::vector<Complex> reconstruct() const;
};

/// psi = sum_i c_i |u_i>|v_i> over the Schmidt rank (coefficients above
/// tolerances().schmidt). Degenerate coefficients are ordered by
/// lexicographic comparison of the (re, im) tuples of their left vectors.
SchmidtForm schmidt_decompose(const StateVector &psi, std::size_t dim_a, std::size_t dim_b);

/// Reduced state on the subsystems listed in `keep` (ascending order of
/// subsystem index). Throws DimensionError if the dims do not multiply to
/// the operator dimension or `keep` is empty / out of range.
DensityOperator partial_trace(const DensityOperator &rho, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep);
/// Same, for |psi><psi| without materializing the full operator.
DensityOperator partial_trace(const StateVector &psi, std::span<const std::size_t> dims,
                              std::span<const std::size_t> keep);

/// (1/2) sum |eigenvalues of (rho - sigma)|.
double trace_distance(const DensityOperator &rho, const DensityOperator &sigma);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityOperator &rho, const DensityOperator &sigma);

}  // namespace qkin

#endif
