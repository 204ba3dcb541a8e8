// Copyright 2026 The tracekit Authors
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

#ifndef TRACEKIT_DENSE_LINALG_HPP
#define TRACEKIT_DENSE_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tracekit {

using Complex = std::complex<double>;

/// Dense complex vector. Entries are finite on construction.
class Vector {
   public:
    explicit Vector(std::size_t dim);
    explicit Vector(std::vector<Complex> entries);

    std::size_t dim() const noexcept { return data_.size(); }

    Complex operator[](std::size_t i) const { return data_[i]; }
    Complex &operator[](std::size_t i) { return data_[i]; }

    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    friend bool operator==(const Vector &, const Vector &) = default;

   private:
    std::vector<Complex> data_;
};

/// Dense n x n complex matrix, row-major, addressed (row, col) from 0.
///
/// std::complex<double> is layout-compatible with an interleaved (re, im)
/// pair, so `entries()` is the interleaved row-major buffer.
class Matrix {
   public:
    /// Zero matrix of dimension `dim` (>= 1).
    explicit Matrix(std::size_t dim);
    /// Takes `dim * dim` row-major entries; all must be finite.
    Matrix(std::size_t dim, std::vector<Complex> entries);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const Complex> diag);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t dim() const noexcept { return dim_; }

    Complex operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
    Complex &operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }

    std::span<const Complex> entries() const noexcept { return data_; }
    std::span<Complex> entries() noexcept { return data_; }

    Matrix &operator+=(const Matrix &rhs);
    Matrix &operator-=(const Matrix &rhs);
    Matrix &operator*=(Complex s);

    friend bool operator==(const Matrix &, const Matrix &) = default;

   private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix &rhs);
Matrix operator-(Matrix lhs, const Matrix &rhs);
Matrix operator*(Complex s, Matrix m);
Matrix operator*(const Matrix &a, const Matrix &b);
Vector operator*(const Matrix &a, const Vector &x);

Vector operator+(const Vector &a, const Vector &b);
Vector operator*(Complex s, const Vector &v);

/// Conjugate transpose.
Matrix adjoint(const Matrix &a);

/// <x, y> = sum_i x_i * conj(y_i): linear in the first slot, conjugate-linear
/// in the second. Every numerical value <Ax, x> in the library uses this.
Complex inner(const Vector &x, const Vector &y);

double norm2(const Vector &x);
double frobenius_norm(const Matrix &a);

/// (1/n) * sum_i a_ii.
Complex normalized_trace_exact(const Matrix &a);

/// Matrix unit e_ij of dimension n (0-based indices): 1 at (i, j), 0 elsewhere.
Matrix matrix_unit(std::size_t i, std::size_t j, std::size_t n);

/// ||A* A - I||_F.
double unitarity_residual(const Matrix &u);

/// ||H - H*||_F.
double hermitian_asymmetry(const Matrix &h);

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;  // nondecreasing
    Matrix basis;                     // unitary, columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Rejects inputs with ||H - H*||_F > 1e-12 * max(1, ||H||_F). Sweeps stop
/// once the off-diagonal Frobenius mass drops to 1e-13 * ||H||_F; after 30
/// sweeps without reaching it a NumericalFailure reports the residual.
HermitianEigenDecomposition hermitian_eigendecomposition(const Matrix &h);

/// max |lambda_i| of a Hermitian matrix.
double operator_norm_hermitian(const Matrix &h);

/// Q * diag(values) * Q*.
Matrix reconstruct(const Matrix &basis, std::span<const Complex> values);

}  // namespace tracekit

#endif  // TRACEKIT_DENSE_LINALG_HPP
