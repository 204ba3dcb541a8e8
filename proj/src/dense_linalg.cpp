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

#include "tracekit/dense_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tracekit/error.hpp"

namespace tracekit {

namespace {

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(std::span<const Complex> entries, const char *what) {
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (!is_finite(entries[k])) {
            throw InvalidArgument(std::string(what) + ": non-finite entry at flat index " + std::to_string(k));
        }
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                              std::to_string(b) + ")");
    }
}

constexpr int kMaxSweeps = 30;
constexpr double kOffDiagonalTolerance = 1e-13;
constexpr double kHermitianTolerance = 1e-12;

double off_diagonal_norm(const Matrix &a) {
    double acc = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) acc += std::norm(a(i, j));
        }
    }
    return std::sqrt(acc);
}

}  // namespace

Vector::Vector(std::size_t dim) : data_(dim) {
    if (dim == 0) throw InvalidArgument("Vector: dimension must be at least 1");
}

Vector::Vector(std::vector<Complex> entries) : data_(std::move(entries)) {
    if (data_.empty()) throw InvalidArgument("Vector: dimension must be at least 1");
    require_finite(data_, "Vector");
}

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw InvalidArgument("Matrix: dimension must be at least 1");
}

Matrix::Matrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw InvalidArgument("Matrix: dimension must be at least 1");
    if (data_.size() != dim * dim) {
        throw InvalidArgument("Matrix: expected " + std::to_string(dim * dim) + " entries, got " +
                              std::to_string(data_.size()));
    }
    require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const Complex> diag) {
    Matrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    require_finite(m.entries(), "Matrix::diagonal");
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    std::vector<Complex> d(diag.begin(), diag.end());
    return diagonal(std::span<const Complex>(d));
}

Matrix &Matrix::operator+=(const Matrix &rhs) {
    require_same_dim(dim_, rhs.dim_, "Matrix +");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &rhs) {
    require_same_dim(dim_, rhs.dim_, "Matrix -");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Matrix &Matrix::operator*=(Complex s) {
    for (auto &z : data_) z *= s;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix &rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix &rhs) { return lhs -= rhs; }
Matrix operator*(Complex s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix &a, const Matrix &b) {
    require_same_dim(a.dim(), b.dim(), "Matrix *");
    const std::size_t n = a.dim();
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector operator*(const Matrix &a, const Vector &x) {
    require_same_dim(a.dim(), x.dim(), "Matrix * Vector");
    const std::size_t n = a.dim();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

Vector operator+(const Vector &a, const Vector &b) {
    require_same_dim(a.dim(), b.dim(), "Vector +");
    Vector c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vector operator*(Complex s, const Vector &v) {
    Vector c(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) c[i] = s * v[i];
    return c;
}

Matrix adjoint(const Matrix &a) {
    const std::size_t n = a.dim();
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) r(i, j) = std::conj(a(j, i));
    }
    return r;
}

Complex inner(const Vector &x, const Vector &y) {
    require_same_dim(x.dim(), y.dim(), "inner");
    // Spelled out so that <x, x> has an imaginary part of exactly zero.
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xi * yr - xr * yi;
    }
    return {re, im};
}

double norm2(const Vector &x) { return std::sqrt(inner(x, x).real()); }

double frobenius_norm(const Matrix &a) {
    double acc = 0.0;
    for (Complex z : a.entries()) acc += std::norm(z);
    return std::sqrt(acc);
}

Complex normalized_trace_exact(const Matrix &a) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += a(i, i);
    return acc / static_cast<double>(a.dim());
}

Matrix matrix_unit(std::size_t i, std::size_t j, std::size_t n) {
    if (n == 0 || i >= n || j >= n) {
        throw InvalidArgument("matrix_unit: index (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") out of range for dimension " + std::to_string(n));
    }
    Matrix e(n);
    e(i, j) = 1.0;
    return e;
}

double unitarity_residual(const Matrix &u) {
    return frobenius_norm(adjoint(u) * u - Matrix::identity(u.dim()));
}

double hermitian_asymmetry(const Matrix &h) { return frobenius_norm(h - adjoint(h)); }

HermitianEigenDecomposition hermitian_eigendecomposition(const Matrix &h) {
    const std::size_t n = h.dim();
    const double scale = frobenius_norm(h);
    const double asym = hermitian_asymmetry(h);
    if (asym > kHermitianTolerance * std::max(1.0, scale)) {
        throw InvalidArgument("hermitian_eigendecomposition: matrix is not Hermitian, ||H - H*||_F = " +
                              std::to_string(asym));
    }

    // Work on the exactly Hermitian part so the diagonal stays real.
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = h(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    Matrix q = Matrix::identity(n);

    const double target = kOffDiagonalTolerance * scale;
    double off = off_diagonal_norm(a);
    int sweep = 0;
    while (off > target) {
        if (sweep == kMaxSweeps) {
            throw NumericalFailure("hermitian_eigendecomposition: no convergence after " +
                                   std::to_string(kMaxSweeps) + " sweeps, off-diagonal residual " +
                                   std::to_string(off));
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const Complex apr = a(p, r);
                const double mag = std::abs(apr);
                if (mag == 0.0) continue;

                // J = D P D* with D = diag(1, e^{-i phi}) making the pivot real and
                // P the real symmetric Jacobi rotation; A <- J* A J, Q <- Q J.
                const Complex phase = apr / mag;
                const double app = a(p, p).real();
                const double arr = a(r, r).real();
                const double theta = (arr - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex s_phase = s * phase;
                const Complex s_phase_conj = std::conj(s_phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akr = a(k, r);
                    a(k, p) = c * akp - s_phase_conj * akr;
                    a(k, r) = s_phase * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex ark = a(r, k);
                    a(p, k) = c * apk - s_phase * ark;
                    a(r, k) = s_phase_conj * apk + c * ark;
                }
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(r, r) = a(r, r).real();

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex qkp = q(k, p);
                    const Complex qkr = q(k, r);
                    q(k, p) = c * qkp - s_phase_conj * qkr;
                    q(k, r) = s_phase * qkp + c * qkr;
                }
            }
        }
        off = off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigenDecomposition out{std::vector<double>(n), Matrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = q(i, order[k]);
    }
    return out;
}

double operator_norm_hermitian(const Matrix &h) {
    const auto eig = hermitian_eigendecomposition(h);
    return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
}

Matrix reconstruct(const Matrix &basis, std::span<const Complex> values) {
    const std::size_t n = basis.dim();
    require_same_dim(n, values.size(), "reconstruct");
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += basis(i, k) * values[k] * std::conj(basis(j, k));
            out(i, j) = acc;
        }
    }
    return out;
}

}  // namespace tracekit
