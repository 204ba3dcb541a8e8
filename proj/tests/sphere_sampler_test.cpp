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

#include "tracekit/sphere_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "tracekit/error.hpp"

using namespace tracekit;

namespace {

// Sorted flattened samples, for multiset comparisons.
std::vector<std::pair<double, double>> flatten(const std::vector<UnitSphereSample> &samples) {
    std::vector<std::pair<double, double>> out;
    for (const auto &s : samples)
        for (Complex z : s.vector().entries()) out.emplace_back(z.real(), z.imag());
    return out;
}

std::vector<UnitSphereSample> draw_chunk(std::uint64_t seed, std::uint64_t chunk, std::size_t count, std::size_t n) {
    RandomStream s = spawn_stream({seed, chunk});
    std::vector<UnitSphereSample> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(sample_unit_vector(s, n));
    return out;
}

}  // namespace

// Known-answer vectors published with the Random123 reference implementation.
TEST(sphere_sampler, philox_known_answers) {
    RandomStream zero({0, 0});
    EXPECT_EQ(zero.next_u64(), 0xe169c58d6627e8d5ull);
    EXPECT_EQ(zero.next_u64(), 0x9b00dbd8bc57ac4cull);
}

TEST(sphere_sampler, identical_spec_identical_sequence) {
    RandomStream a = spawn_stream({42, 7});
    RandomStream b = spawn_stream({42, 7});
    for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(sphere_sampler, distinct_index_distinct_sequence) {
    RandomStream a = spawn_stream({42, 0});
    RandomStream b = spawn_stream({42, 1});
    EXPECT_NE(a.next_u64(), b.next_u64());
    RandomStream c = spawn_stream({43, 0});
    RandomStream d = spawn_stream({42, 0});
    EXPECT_NE(c.next_u64(), d.next_u64());
}

TEST(sphere_sampler, recreated_spec_reproduces_vector) {
    RandomStream a = spawn_stream({2024, 3});
    const StreamSpec saved = a.spec();
    const auto x = sample_unit_vector(a, 4);
    RandomStream b = spawn_stream(StreamSpec{saved.master_seed, saved.stream_index});
    const auto y = sample_unit_vector(b, 4);
    EXPECT_EQ(x.vector(), y.vector());
    EXPECT_NEAR(norm2(x.vector()), 1.0, 1e-12);
}

TEST(sphere_sampler, uniform_range) {
    RandomStream s({5, 0});
    for (int k = 0; k < 10000; ++k) {
        const double u = s.next_uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(sphere_sampler, gaussian_moments) {
    RandomStream s({6, 0});
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double g = s.next_gaussian();
        sum += g;
        sum2 += g * g;
        sum4 += g * g * g * g;
    }
    EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(sum2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(sum4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(sphere_sampler, one_dimensional_sphere_is_unit_circle) {
    RandomStream s({7, 0});
    for (int k = 0; k < 1000; ++k) {
        const auto x = sample_unit_vector(s, 1);
        ASSERT_EQ(x.dim(), 1u);
        EXPECT_NEAR(std::abs(x.vector()[0]), 1.0, 1e-12);
    }
}

TEST(sphere_sampler, every_sample_has_unit_norm) {
    RandomStream s({8, 0});
    for (int k = 0; k < 2000; ++k) {
        const std::size_t n = tracekit::testing::random_dim(s, 1, 64);
        EXPECT_NEAR(norm2(sample_unit_vector(s, n).vector()), 1.0, 1e-12);
    }
}

TEST(sphere_sampler, zero_dimension_rejected) {
    RandomStream s({9, 0});
    EXPECT_THROW(sample_unit_vector(s, 0), InvalidArgument);
}

TEST(sphere_sampler, tiny_vector_rejected_by_normalization) {
    EXPECT_THROW(UnitSphereSample::from_vector(Vector(std::vector<Complex>{1e-200, 0.0})), InvalidArgument);
    EXPECT_THROW(UnitSphereSample::from_vector(Vector(3)), InvalidArgument);
}

// Mean of |x_1|^2 equals (1/n) tr e_11 = 1/4.
TEST(sphere_sampler, first_coordinate_mass_n4) {
    RandomStream s({10, 0});
    const int count = 100000;
    double sum = 0.0;
    for (int k = 0; k < count; ++k) sum += std::norm(sample_unit_vector(s, 4).vector()[0]);
    EXPECT_NEAR(sum / count, 0.25, 0.01);
}

TEST(sphere_sampler, coordinate_masses_within_five_standard_errors) {
    for (std::size_t n : {2, 4, 8}) {
        RandomStream s({100 + n, 0});
        const int count = 100000;
        std::vector<double> sum(n), sum2(n);
        for (int k = 0; k < count; ++k) {
            const auto x = sample_unit_vector(s, n);
            for (std::size_t i = 0; i < n; ++i) {
                const double m = std::norm(x.vector()[i]);
                sum[i] += m;
                sum2[i] += m * m;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double mean = sum[i] / count;
            const double var = (sum2[i] - count * mean * mean) / (count - 1);
            const double se = std::sqrt(var / count);
            EXPECT_LE(std::abs(mean - 1.0 / n), 5.0 * se) << "n=" << n << " i=" << i;
        }
    }
}

// <A Vx, Vx> and <V*AV x, x> agree draw by draw for a fixed unitary V.
TEST(sphere_sampler, unitary_invariance_per_sample) {
    RandomStream s({11, 0});
    const std::size_t n = 6;
    const Matrix v = tracekit::testing::gram_schmidt_unitary(s, n);
    const Matrix a = random_gaussian_matrix(s, n);
    const Matrix conj_a = adjoint(v) * a * v;
    for (int k = 0; k < 1000; ++k) {
        const auto x = sample_unit_vector(s, n);
        const Vector vx = v * x.vector();
        const Complex lhs = inner(a * vx, vx);
        const Complex rhs = inner(conj_a * x.vector(), x.vector());
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1.0 + frobenius_norm(a)));
    }
}

TEST(sphere_sampler, worker_count_does_not_change_sample_multiset) {
    const std::uint64_t seed = 77;
    const std::size_t n = 3, chunk = 64, chunks = 16;

    std::vector<UnitSphereSample> serial;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        auto part = draw_chunk(seed, c, chunk, n);
        serial.insert(serial.end(), part.begin(), part.end());
    }

    std::vector<std::vector<UnitSphereSample>> parts(chunks);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < 8; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t c = w; c < chunks; c += 8) parts[c] = draw_chunk(seed, c, chunk, n);
        });
    }
    for (auto &t : pool) t.join();
    std::vector<UnitSphereSample> parallel;
    for (auto &p : parts) parallel.insert(parallel.end(), p.begin(), p.end());

    auto a = flatten(serial);
    auto b = flatten(parallel);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
}

TEST(sphere_sampler, random_hermitian_is_hermitian) {
    RandomStream s({12, 0});
    const Matrix h = random_hermitian_matrix(s, 5);
    EXPECT_EQ(hermitian_asymmetry(h), 0.0);
}
