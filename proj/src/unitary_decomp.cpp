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

#include "tracekit/unitary_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tracekit/error.hpp"

namespace tracekit {

namespace {

constexpr double kEdgeSnap = 1e-13;
constexpr double kContractionSlack = 1e-12;
constexpr double kDetModulusTolerance = 1e-8;

bool is_zero(const Matrix &m) {
    return std::all_of(m.entries().begin(), m.entries().end(), [](Complex z) { return z == Complex(0.0); });
}

void refresh_residuals(UnitaryDecomposition &d, const Matrix &source) {
    d.reconstruction_residual = frobenius_norm(d.sum() - source);
    d.unitarity_residual = 0.0;
    for (const Matrix &u : d.unitaries) d.unitarity_residual = std::max(d.unitarity_residual, unitarity_residual(u));
}

}  // namespace

Matrix UnitaryDecomposition::sum() const {
    Matrix acc(unitaries.front().dim());
    for (std::size_t k = 0; k < unitaries.size(); ++k) acc += coefficients[k] * unitaries[k];
    return acc;
}

HermitianParts hermitian_parts(const Matrix &a) {
    const Matrix a_star = adjoint(a);
    return {0.5 * (a + a_star), Complex(0.0, -0.5) * (a - a_star)};
}

Matrix hermitian_contraction_to_unitary(const Matrix &h) {
    const auto eig = hermitian_eigendecomposition(h);
    const double norm = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    if (norm > 1.0 + kContractionSlack) {
        throw InvalidArgument("hermitian_contraction_to_unitary: operator norm " + std::to_string(norm) +
                              " exceeds 1; rescale the input to a contraction first");
    }
    std::vector<Complex> values(h.dim());
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double lambda = eig.eigenvalues[k];
        // Eigenvalues within rounding of +-1 would otherwise leave a spurious
        // sqrt(eps)-sized imaginary part.
        const double gap = 1.0 - std::abs(lambda);
        values[k] = {lambda, gap <= kEdgeSnap ? 0.0 : -std::sqrt(1.0 - lambda * lambda)};
    }
    return reconstruct(eig.basis, values);
}

UnitaryDecomposition decompose_into_unitaries(const Matrix &a) {
    UnitaryDecomposition out;
    if (is_zero(a)) {
        out.coefficients.push_back(0.0);
        out.unitaries.push_back(Matrix::identity(a.dim()));
        refresh_residuals(out, a);
        return out;
    }

    const HermitianParts parts = hermitian_parts(a);
    auto emit = [&](const Matrix &part, Complex unit) {
        if (is_zero(part)) return;
        const double h = operator_norm_hermitian(part);
        if (h == 0.0) return;
        const double scale = std::max(1.0, h);
        const Matrix u = hermitian_contraction_to_unitary((1.0 / scale) * part);
        const Complex coeff = unit * (scale / 2.0);
        out.coefficients.push_back(coeff);
        out.unitaries.push_back(u);
        out.coefficients.push_back(coeff);
        out.unitaries.push_back(adjoint(u));
    };
    emit(parts.real_part, 1.0);
    emit(parts.imag_part, Complex(0.0, 1.0));

    // Both parts numerically zero but A not exactly zero cannot happen for
    // finite input; fall back to the degenerate form anyway.
    if (out.unitaries.empty()) {
        out.coefficients.push_back(0.0);
        out.unitaries.push_back(Matrix::identity(a.dim()));
    }
    refresh_residuals(out, a);
    return out;
}

Complex determinant(const Matrix &a) {
    const std::size_t n = a.dim();
    Matrix lu = a;
    Complex det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
            det = -det;
        }
        const Complex d = lu(k, k);
        det *= d;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / d;
            if (f == Complex(0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return det;
}

Rephased rephase_to_det_one(const Matrix &u, Complex a) {
    const Complex det = determinant(u);
    const double modulus = std::abs(det);
    if (!(std::abs(modulus - 1.0) <= kDetModulusTolerance)) {
        throw InvalidArgument("rephase_to_det_one: |det U| = " + std::to_string(modulus) +
                              " deviates from 1; input is not unitary");
    }
    double angle = std::arg(det);
    if (angle <= -std::numbers::pi) angle = std::numbers::pi;
    const Complex zeta = std::polar(1.0, angle / static_cast<double>(u.dim()));
    return {(1.0 / zeta) * u, a * zeta};
}

UnitaryDecomposition rephase_decomposition(const UnitaryDecomposition &d, const Matrix &source) {
    UnitaryDecomposition out;
    for (std::size_t k = 0; k < d.unitaries.size(); ++k) {
        Rephased r = rephase_to_det_one(d.unitaries[k], d.coefficients[k]);
        out.coefficients.push_back(r.coefficient);
        out.unitaries.push_back(std::move(r.unitary));
    }
    refresh_residuals(out, source);
    return out;
}

}  // namespace tracekit
