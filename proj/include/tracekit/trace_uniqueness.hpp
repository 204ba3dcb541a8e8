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

#ifndef TRACEKIT_TRACE_UNIQUENESS_HPP
#define TRACEKIT_TRACE_UNIQUENESS_HPP

// A linear functional f on M_n(C) is determined by its values v[i][j] =
// f(e_ij) on the matrix units, since f(A) = sum_ij v[i][j] A(i, j). The
// tracial condition f(AB) = f(BA) on all pairs of matrix units, together
// with f(I) = 1, is therefore a finite linear system in the n^2 unknowns
// v[i][j]. This module builds that system and certifies that its solution
// set is the single point v = I/n: the homogeneous part has a
// one-dimensional null space, and the normalization row pins the scale.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tracekit/dense_linalg.hpp"
#include "tracekit/sphere_sampler.hpp"

namespace tracekit {

inline constexpr std::size_t kMaxUniquenessDim = 8;

/// Dense rows over the n^2 unknowns, unknown (i, j) at column i * n + j.
struct ConstraintSystem {
    std::size_t dim = 0;
    std::size_t unknowns = 0;
    /// Row-major, rows.size() == rhs.size() * unknowns.
    std::vector<Complex> rows;
    std::vector<Complex> rhs;

    std::size_t row_count() const noexcept { return rhs.size(); }
    Complex coeff(std::size_t row, std::size_t col) const { return rows[row * unknowns + col]; }
};

/// Row for tuple (i, j, k, l), in lexicographic order, encodes
/// delta_jk v[i][l] - delta_li v[k][j] = 0 (from e_ij e_kl = delta_jk e_il).
/// The final row is sum_i v[i][i] = normalization.
ConstraintSystem build_constraint_system(std::size_t n, Complex normalization = 1.0);

/// Index of the row for the tuple (i, j, k, l), 0-based.
std::size_t constraint_row_index(std::size_t n, std::size_t i, std::size_t j, std::size_t k, std::size_t l);

struct FunctionalSolution {
    std::size_t dim = 0;
    Matrix values;  // values(i, j) = f(e_ij)
    /// Max absolute constraint residual at the returned solution.
    double residual = 0.0;
    /// Null-space dimension of the system without the normalization row.
    std::size_t nullspace_dim = 0;
};

/// Solves the constraint system by Gaussian elimination with partial
/// pivoting. Throws NumericalFailure when the homogeneous null space is not
/// one-dimensional or the normalized system is inconsistent.
FunctionalSolution solve_unique_functional(std::size_t n, Complex normalization = 1.0);

/// Numerical rank, pivots below 1e-10 times the largest pivot count as zero.
std::size_t numerical_rank(const ConstraintSystem &system, bool include_normalization);

/// f(A) = sum_ij v(i, j) A(i, j).
Complex apply_functional(const Matrix &values, const Matrix &a);

struct TracialGap {
    double max_gap = 0.0;           // max |f(AB) - f(BA)|
    double max_norm_product = 0.0;  // max ||A||_F ||B||_F over the same trials
};

/// Evaluates f(AB) - f(BA) on `trials` pairs of random complex Gaussian
/// matrices drawn from `spec`. A tracial f keeps max_gap within
/// 1e-10 * max_norm_product.
TracialGap verify_tracial_on_random_pairs(const Matrix &values, std::size_t trials, StreamSpec spec);

inline TracialGap verify_tracial_on_random_pairs(const FunctionalSolution &f, std::size_t trials, StreamSpec spec) {
    return verify_tracial_on_random_pairs(f.values, trials, spec);
}

}  // namespace tracekit

#endif  // TRACEKIT_TRACE_UNIQUENESS_HPP
