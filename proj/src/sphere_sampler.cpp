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

#include <cmath>

#include "tracekit/error.hpp"

namespace tracekit {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

constexpr double kMinGaussianNorm = 1e-150;

}  // namespace

RandomStream::RandomStream(StreamSpec spec) noexcept : spec_(spec) {}

void RandomStream::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_counter_), static_cast<std::uint32_t>(block_counter_ >> 32),
        static_cast<std::uint32_t>(spec_.stream_index), static_cast<std::uint32_t>(spec_.stream_index >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(spec_.master_seed),
                                              static_cast<std::uint32_t>(spec_.master_seed >> 32)};
    block_ = philox4x32_10(ctr, key);
    ++block_counter_;
    block_pos_ = 0;
}

std::uint64_t RandomStream::next_u64() noexcept {
    if (block_pos_ >= 4) refill();
    const std::uint64_t lo = block_[block_pos_];
    const std::uint64_t hi = block_[block_pos_ + 1];
    block_pos_ += 2;
    return (hi << 32) | lo;
}

double RandomStream::next_uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Complex RandomStream::next_complex_gaussian() noexcept {
    for (;;) {
        const double u = 2.0 * next_uniform() - 1.0;
        const double v = 2.0 * next_uniform() - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        return {u * f, v * f};
    }
}

double RandomStream::next_gaussian() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const Complex z = next_complex_gaussian();
    spare_ = z.imag();
    has_spare_ = true;
    return z.real();
}

RandomStream spawn_stream(StreamSpec spec) noexcept { return RandomStream(spec); }

UnitSphereSample UnitSphereSample::from_vector(Vector v) {
    const double norm = norm2(v);
    if (!(norm >= kMinGaussianNorm)) {
        throw InvalidArgument("UnitSphereSample: vector norm too small to normalize");
    }
    for (Complex &z : v.entries()) z /= norm;
    return UnitSphereSample(std::move(v));
}

UnitSphereSample sample_unit_vector(RandomStream &stream, std::size_t n) {
    if (n == 0) throw InvalidArgument("sample_unit_vector: dimension must be at least 1");
    Vector g(n);
    for (;;) {
        for (Complex &z : g.entries()) z = stream.next_complex_gaussian();
        if (norm2(g) >= kMinGaussianNorm) return UnitSphereSample::from_vector(std::move(g));
    }
}

Matrix random_gaussian_matrix(RandomStream &stream, std::size_t n) {
    Matrix m(n);
    for (Complex &z : m.entries()) z = stream.next_complex_gaussian();
    return m;
}

Matrix random_hermitian_matrix(RandomStream &stream, std::size_t n) {
    const Matrix g = random_gaussian_matrix(stream, n);
    return 0.5 * (g + adjoint(g));
}

}  // namespace tracekit
