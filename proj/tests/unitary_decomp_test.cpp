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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "tracekit/error.hpp"
#include "tracekit/sphere_sampler.hpp"

using namespace tracekit;
using tracekit::testing::max_abs_diff;

namespace {

void expect_valid(const Matrix &a, const UnitaryDecomposition &d) {
    const double n = static_cast<double>(a.dim());
    ASSERT_GE(d.unitaries.size(), 1u);
    ASSERT_LE(d.unitaries.size(), 4u);
    ASSERT_EQ(d.unitaries.size(), d.coefficients.size());
    EXPECT_LE(d.reconstruction_residual, 1e-10 * std::max(1.0, frobenius_norm(a)));
    EXPECT_LE(d.unitarity_residual, 1e-10 * n);
    // Residual fields agree with an independent recomputation.
    Matrix sum(a.dim());
    for (std::size_t k = 0; k < d.unitaries.size(); ++k) {
        sum += d.coefficients[k] * d.unitaries[k];
        EXPECT_LE(unitarity_residual(d.unitaries[k]), 1e-10 * n);
    }
    EXPECT_NEAR(frobenius_norm(sum - a), d.reconstruction_residual, 1e-15 * (1.0 + frobenius_norm(a)));
}

// A contraction with prescribed spectrum in a random basis.
Matrix hermitian_with_spectrum(RandomStream &s, const std::vector<double> &spectrum) {
    const Matrix q = tracekit::testing::gram_schmidt_unitary(s, spectrum.size());
    return reconstruct(q, std::vector<Complex>(spectrum.begin(), spectrum.end()));
}

}  // namespace

TEST(hermitian_parts, examples) {
    RandomStream s({1, 0});
    const Matrix h = random_hermitian_matrix(s, 3);
    const auto p = hermitian_parts(h);
    EXPECT_EQ(p.real_part, h);
    EXPECT_EQ(p.imag_part, Matrix(3));

    const auto q = hermitian_parts(Complex(0, 1) * Matrix::identity(3));
    EXPECT_EQ(q.real_part, Matrix(3));
    EXPECT_EQ(q.imag_part, Matrix::identity(3));

    const auto r = hermitian_parts(matrix_unit(0, 1, 2));
    EXPECT_EQ(r.real_part, Matrix(2, {0.0, 0.5, 0.5, 0.0}));
    EXPECT_EQ(r.imag_part, Matrix(2, {0.0, Complex(0, -0.5), Complex(0, 0.5), 0.0}));
}

TEST(hermitian_parts, random_reconstruction) {
    RandomStream s({2, 0});
    for (int t = 0; t < 50; ++t) {
        const Matrix a = random_gaussian_matrix(s, tracekit::testing::random_dim(s, 1, 12));
        const auto p = hermitian_parts(a);
        const double scale = frobenius_norm(a);
        EXPECT_LE(hermitian_asymmetry(p.real_part), 1e-14 * scale);
        EXPECT_LE(hermitian_asymmetry(p.imag_part), 1e-14 * scale);
        EXPECT_LE(frobenius_norm(p.real_part + Complex(0, 1) * p.imag_part - a), 1e-14 * scale);
    }
}

TEST(contraction_to_unitary, zero_gives_minus_i_identity) {
    const Matrix u = hermitian_contraction_to_unitary(Matrix(3));
    EXPECT_LE(max_abs_diff(u, Complex(0, -1) * Matrix::identity(3)), 1e-15);
    EXPECT_LE(frobenius_norm(0.5 * (u + adjoint(u))), 1e-15);
}

TEST(contraction_to_unitary, identity_gives_identity) {
    EXPECT_LE(max_abs_diff(hermitian_contraction_to_unitary(Matrix::identity(4)), Matrix::identity(4)), 1e-15);
}

TEST(contraction_to_unitary, swap_matrix_is_its_own_unitary) {
    const Matrix h(2, {0.0, 1.0, 1.0, 0.0});
    EXPECT_LE(max_abs_diff(hermitian_contraction_to_unitary(h), h), 1e-14);
}

TEST(contraction_to_unitary, random_contractions) {
    RandomStream s({3, 0});
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = tracekit::testing::random_dim(s, 1, 12);
        std::vector<double> spectrum(n);
        for (auto &l : spectrum) l = 2.0 * s.next_uniform() - 1.0;
        spectrum[0] = (t % 2) ? 1.0 : -1.0;  // edge eigenvalue exercises the clamp
        const Matrix h = hermitian_with_spectrum(s, spectrum);
        const Matrix u = hermitian_contraction_to_unitary(h);
        EXPECT_LE(unitarity_residual(u), 1e-10 * n);
        EXPECT_LE(frobenius_norm(0.5 * (u + adjoint(u)) - h), 1e-10 * std::max(1.0, frobenius_norm(h)));
    }
}

TEST(contraction_to_unitary, rejects_norm_above_one_and_non_hermitian) {
    try {
        hermitian_contraction_to_unitary(Matrix::diagonal(std::vector<double>{0.5, 1.01}));
        FAIL() << "expected rejection";
    } catch (const InvalidArgument &e) {
        EXPECT_NE(std::string(e.what()).find("rescale"), std::string::npos);
    }
    EXPECT_THROW(hermitian_contraction_to_unitary(matrix_unit(0, 1, 2)), InvalidArgument);
    EXPECT_NO_THROW(hermitian_contraction_to_unitary(Matrix::diagonal(std::vector<double>{1.0 + 1e-13, 0.0})));
}

TEST(decompose, zero_matrix_single_term) {
    const auto d = decompose_into_unitaries(Matrix(3));
    ASSERT_EQ(d.unitaries.size(), 1u);
    EXPECT_EQ(d.coefficients[0], Complex(0.0));
    EXPECT_EQ(d.unitaries[0], Matrix::identity(3));
    EXPECT_EQ(d.reconstruction_residual, 0.0);
}

TEST(decompose, hermitian_contraction_two_half_terms) {
    RandomStream s({4, 0});
    const Matrix h = hermitian_with_spectrum(s, {-0.9, 0.2, 0.7});
    // Make it exactly Hermitian so the imaginary part vanishes exactly.
    const Matrix a = hermitian_parts(h).real_part;
    const auto d = decompose_into_unitaries(a);
    ASSERT_EQ(d.unitaries.size(), 2u);
    EXPECT_EQ(d.coefficients[0], Complex(0.5));
    EXPECT_EQ(d.coefficients[1], Complex(0.5));
    EXPECT_EQ(d.unitaries[1], adjoint(d.unitaries[0]));
    expect_valid(a, d);
}

TEST(decompose, nilpotent_2x2_four_terms) {
    const Matrix a = matrix_unit(0, 1, 2);
    const auto d = decompose_into_unitaries(a);
    ASSERT_EQ(d.unitaries.size(), 4u);
    EXPECT_LE(d.reconstruction_residual, 1e-10);
    expect_valid(a, d);
}

TEST(decompose, large_norm_parts_are_rescaled) {
    const Matrix a = Matrix::diagonal(std::vector<Complex>{Complex(5, -3), Complex(-2, 7)});
    const auto d = decompose_into_unitaries(a);
    ASSERT_EQ(d.unitaries.size(), 4u);
    EXPECT_NEAR(d.coefficients[0].real(), 2.5, 1e-14);
    EXPECT_NEAR(d.coefficients[2].imag(), 3.5, 1e-14);
    expect_valid(a, d);
}

TEST(decompose, random_matrices_property) {
    RandomStream s({5, 0});
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = tracekit::testing::random_dim(s, 2, 12);
        const double scale = std::pow(10.0, 4.0 * s.next_uniform() - 2.0);
        const Matrix a = scale * random_gaussian_matrix(s, n);
        expect_valid(a, decompose_into_unitaries(a));
    }
}

TEST(determinant, examples) {
    EXPECT_EQ(determinant(Matrix::identity(4)), Complex(1.0));
    EXPECT_EQ(determinant(Matrix::diagonal(std::vector<double>{2, 3})), Complex(6.0));
    EXPECT_EQ(determinant(matrix_unit(0, 1, 2)), Complex(0.0));
    EXPECT_NEAR(std::abs(determinant(Matrix(2, {0.0, 1.0, 1.0, 0.0})) + 1.0), 0.0, 1e-15);
}

TEST(determinant, agrees_with_cofactor_expansion_3x3) {
    RandomStream s({6, 0});
    for (int t = 0; t < 50; ++t) {
        const Matrix a = random_gaussian_matrix(s, 3);
        const Complex cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                            a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                            a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        EXPECT_LE(std::abs(determinant(a) - cof), 1e-12 * (1.0 + std::abs(cof)));
    }
}

TEST(determinant, unitary_has_unit_modulus) {
    RandomStream s({7, 0});
    for (int t = 0; t < 30; ++t) {
        const auto d = decompose_into_unitaries(random_gaussian_matrix(s, tracekit::testing::random_dim(s, 1, 12)));
        for (const Matrix &u : d.unitaries) EXPECT_NEAR(std::abs(determinant(u)), 1.0, 1e-8);
    }
}

TEST(rephase, identity_untouched) {
    const auto r = rephase_to_det_one(Matrix::identity(3), Complex(2, -1));
    EXPECT_EQ(r.unitary, Matrix::identity(3));
    EXPECT_EQ(r.coefficient, Complex(2, -1));
}

TEST(rephase, diagonal_phase) {
    const Matrix u = Matrix::diagonal(std::vector<Complex>{Complex(0, 1), 1.0});
    const auto r = rephase_to_det_one(u, 1.0);
    const Complex zeta = std::polar(1.0, std::numbers::pi / 4);
    EXPECT_LE(std::abs(r.coefficient - zeta), 1e-15);
    EXPECT_LE(max_abs_diff(r.unitary, std::conj(zeta) * u), 1e-15);
    EXPECT_LE(std::abs(determinant(r.unitary) - 1.0), 1e-15);
}

TEST(rephase, global_phase) {
    const Matrix u = std::polar(1.0, 0.3) * Matrix::identity(2);
    const auto r = rephase_to_det_one(u, 1.0);
    EXPECT_LE(std::abs(determinant(r.unitary) - 1.0), 1e-10);
    EXPECT_LE(std::abs(r.coefficient - std::polar(1.0, 0.3)), 1e-15);
}

TEST(rephase, rejects_non_unitary) {
    EXPECT_THROW(rephase_to_det_one(Matrix::diagonal(std::vector<double>{2, 1}), 1.0), InvalidArgument);
    EXPECT_THROW(rephase_to_det_one(matrix_unit(0, 0, 2), 1.0), InvalidArgument);
}

TEST(rephase, preserves_products_and_decomposition_value) {
    RandomStream s({8, 0});
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = tracekit::testing::random_dim(s, 1, 12);
        const Matrix a = random_gaussian_matrix(s, n);
        const auto d = decompose_into_unitaries(a);
        for (std::size_t k = 0; k < d.unitaries.size(); ++k) {
            const auto r = rephase_to_det_one(d.unitaries[k], d.coefficients[k]);
            EXPECT_LE(frobenius_norm(r.coefficient * r.unitary - d.coefficients[k] * d.unitaries[k]),
                      1e-14 * frobenius_norm(d.unitaries[k]));
        }
        const auto rd = rephase_decomposition(d, a);
        expect_valid(a, rd);
        EXPECT_LE(frobenius_norm(rd.sum() - d.sum()), 1e-12 * std::max(1.0, frobenius_norm(a)));
        for (const Matrix &u : rd.unitaries) EXPECT_LE(std::abs(determinant(u) - 1.0), 1e-8);
    }
}
