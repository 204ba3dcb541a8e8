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

#include "tracekit/trace_uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tracekit/error.hpp"

namespace tracekit {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kConsistencyTolerance = 1e-12;

void require_dim(std::size_t n) {
    if (n < 1 || n > kMaxUniquenessDim) {
        throw InvalidArgument("trace uniqueness: dimension " + std::to_string(n) + " outside supported range 1.." +
                              std::to_string(kMaxUniquenessDim));
    }
}

// Row echelon form of an augmented system [M | b] (b may be absent).
struct Echelon {
    std::size_t rows;
    std::size_t width;  // unknowns + (augmented ? 1 : 0)
    std::vector<Complex> data;
    std::vector<std::size_t> pivot_cols;  // pivot_cols[r] is the pivot column of row r
};

Echelon eliminate(std::vector<Complex> data, std::size_t rows, std::size_t unknowns, bool augmented) {
    Echelon e{rows, unknowns + (augmented ? 1 : 0), std::move(data), {}};
    auto at = [&](std::size_t r, std::size_t c) -> Complex & { return e.data[r * e.width + c]; };

    double reference = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < unknowns; ++c) reference = std::max(reference, std::abs(at(r, c)));
    }
    const double threshold = kRankTolerance * reference;

    std::size_t row = 0;
    for (std::size_t col = 0; col < unknowns && row < rows; ++col) {
        std::size_t pivot = row;
        double best = std::abs(at(row, col));
        for (std::size_t r = row + 1; r < rows; ++r) {
            const double v = std::abs(at(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best <= threshold || best == 0.0) continue;
        if (pivot != row) {
            for (std::size_t c = 0; c < e.width; ++c) std::swap(at(row, c), at(pivot, c));
        }
        const Complex p = at(row, col);
        for (std::size_t r = row + 1; r < rows; ++r) {
            const Complex f = at(r, col) / p;
            if (f == Complex(0.0)) continue;
            at(r, col) = 0.0;
            for (std::size_t c = col + 1; c < e.width; ++c) at(r, c) -= f * at(row, c);
        }
        e.pivot_cols.push_back(col);
        ++row;
    }
    return e;
}

std::vector<Complex> system_data(const ConstraintSystem &s, std::size_t rows, bool augmented) {
    const std::size_t width = s.unknowns + (augmented ? 1 : 0);
    std::vector<Complex> data(rows * width);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < s.unknowns; ++c) data[r * width + c] = s.coeff(r, c);
        if (augmented) data[r * width + s.unknowns] = s.rhs[r];
    }
    return data;
}

}  // namespace

std::size_t constraint_row_index(std::size_t n, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return ((i * n + j) * n + k) * n + l;
}

ConstraintSystem build_constraint_system(std::size_t n, Complex normalization) {
    require_dim(n);
    ConstraintSystem s;
    s.dim = n;
    s.unknowns = n * n;
    const std::size_t tuple_rows = n * n * n * n;
    s.rows.assign((tuple_rows + 1) * s.unknowns, Complex(0.0));
    s.rhs.assign(tuple_rows + 1, Complex(0.0));

    auto unknown = [n](std::size_t r, std::size_t c) { return r * n + c; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    // f(e_ij e_kl) = delta_jk f(e_il), f(e_kl e_ij) = delta_li f(e_kj).
                    Complex *row = &s.rows[constraint_row_index(n, i, j, k, l) * s.unknowns];
                    if (j == k) row[unknown(i, l)] += 1.0;
                    if (l == i) row[unknown(k, j)] -= 1.0;
                }
            }
        }
    }
    Complex *norm_row = &s.rows[tuple_rows * s.unknowns];
    for (std::size_t i = 0; i < n; ++i) norm_row[unknown(i, i)] = 1.0;
    s.rhs[tuple_rows] = normalization;
    return s;
}

std::size_t numerical_rank(const ConstraintSystem &system, bool include_normalization) {
    const std::size_t rows = include_normalization ? system.row_count() : system.row_count() - 1;
    return eliminate(system_data(system, rows, false), rows, system.unknowns, false).pivot_cols.size();
}

FunctionalSolution solve_unique_functional(std::size_t n, Complex normalization) {
    const ConstraintSystem system = build_constraint_system(n, normalization);
    const std::size_t m = system.unknowns;

    const std::size_t homogeneous_rank = numerical_rank(system, false);
    const std::size_t nullspace_dim = m - homogeneous_rank;
    if (nullspace_dim != 1) {
        throw NumericalFailure("solve_unique_functional: homogeneous null space has dimension " +
                               std::to_string(nullspace_dim) + ", expected 1");
    }

    Echelon e = eliminate(system_data(system, system.row_count(), true), system.row_count(), m, true);
    if (e.pivot_cols.size() != m) {
        throw NumericalFailure("solve_unique_functional: normalized system has rank " +
                               std::to_string(e.pivot_cols.size()) + " < " + std::to_string(m));
    }

    // Back substitution; every column is a pivot column so pivot_cols[r] == r.
    std::vector<Complex> v(m);
    for (std::size_t r = m; r-- > 0;) {
        Complex acc = e.data[r * e.width + m];
        for (std::size_t c = r + 1; c < m; ++c) acc -= e.data[r * e.width + c] * v[c];
        v[r] = acc / e.data[r * e.width + r];
    }

    double residual = 0.0;
    for (std::size_t r = 0; r < system.row_count(); ++r) {
        Complex acc = -system.rhs[r];
        for (std::size_t c = 0; c < m; ++c) acc += system.coeff(r, c) * v[c];
        residual = std::max(residual, std::abs(acc));
    }
    if (!(residual <= kConsistencyTolerance * std::max(1.0, std::abs(normalization)))) {
        throw NumericalFailure("solve_unique_functional: constraint residual " + std::to_string(residual));
    }

    return {n, Matrix(n, std::move(v)), residual, nullspace_dim};
}

Complex apply_functional(const Matrix &values, const Matrix &a) {
    if (values.dim() != a.dim()) throw InvalidArgument("apply_functional: dimension mismatch");
    Complex acc = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) acc += values.entries()[k] * a.entries()[k];
    return acc;
}

TracialGap verify_tracial_on_random_pairs(const Matrix &values, std::size_t trials, StreamSpec spec) {
    RandomStream stream = spawn_stream(spec);
    TracialGap out;
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix a = random_gaussian_matrix(stream, values.dim());
        const Matrix b = random_gaussian_matrix(stream, values.dim());
        const double gap = std::abs(apply_functional(values, a * b) - apply_functional(values, b * a));
        out.max_gap = std::max(out.max_gap, gap);
        out.max_norm_product = std::max(out.max_norm_product, frobenius_norm(a) * frobenius_norm(b));
    }
    return out;
}

}  // namespace tracekit
