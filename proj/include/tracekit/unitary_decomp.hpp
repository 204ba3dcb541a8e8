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

#ifndef TRACEKIT_UNITARY_DECOMP_HPP
#define TRACEKIT_UNITARY_DECOMP_HPP

#include <vector>

#include "tracekit/dense_linalg.hpp"

namespace tracekit {

/// A = sum_k coefficients[k] * unitaries[k], with 1 to 4 terms.
struct UnitaryDecomposition {
    std::vector<Complex> coefficients;
    std::vector<Matrix> unitaries;
    /// ||sum_k a_k U_k - A||_F
    double reconstruction_residual = 0.0;
    /// max_k ||U_k* U_k - I||_F
    double unitarity_residual = 0.0;

    Matrix sum() const;
};

struct HermitianParts {
    Matrix real_part;  // (A + A*) / 2
    Matrix imag_part;  // (A - A*) / 2i
};

/// Splits A = H1 + i H2 with H1, H2 Hermitian.
HermitianParts hermitian_parts(const Matrix &a);

/// U = H - i (I - H^2)^{1/2} for a Hermitian contraction H, so that
/// H = (U + U*) / 2. Built from the eigendecomposition of H with 1 - lambda^2
/// clamped at zero. Rejects ||H|| > 1 + 1e-12 (rescale first) and
/// non-Hermitian input.
Matrix hermitian_contraction_to_unitary(const Matrix &h);

/// Writes A as a combination of at most four unitaries.
///
/// Each nonzero Hermitian part H_m of A with norm h_m > 1 is scaled by 1/h_m
/// to a contraction C_m, and contributes (s_m/2) U_m + (s_m/2) U_m* where
/// U_m = hermitian_contraction_to_unitary(C_m), s_m = max(1, h_m) for the real
/// part and i * max(1, h_m) for the imaginary part. A zero part contributes
/// nothing; the zero matrix decomposes as the single term 0 * I.
UnitaryDecomposition decompose_into_unitaries(const Matrix &a);

/// LU with partial pivoting.
Complex determinant(const Matrix &a);

struct Rephased {
    Matrix unitary;
    Complex coefficient;
};

/// Divides U by zeta, the principal n-th root of det U, and multiplies the
/// coefficient by zeta: a'U' = aU and det U' = 1. Rejects | |det U| - 1 | > 1e-8.
Rephased rephase_to_det_one(const Matrix &u, Complex a);

/// Applies rephase_to_det_one to every term and refreshes the residuals
/// against `source`.
UnitaryDecomposition rephase_decomposition(const UnitaryDecomposition &d, const Matrix &source);

}  // namespace tracekit

#endif  // TRACEKIT_UNITARY_DECOMP_HPP
