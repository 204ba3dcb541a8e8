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

#ifndef TRACEKIT_SPHERE_SAMPLER_HPP
#define TRACEKIT_SPHERE_SAMPLER_HPP

#include <array>
#include <cstdint>

#include "tracekit/dense_linalg.hpp"

namespace tracekit {

/// Identifies one random substream: the pair fully determines the output.
struct StreamSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    friend bool operator==(const StreamSpec &, const StreamSpec &) = default;
};

/// Counter-based generator (Philox4x32-10).
///
/// The master seed is the 64-bit key; the 128-bit counter is split into
/// (draw offset, stream index), so distinct stream indices walk disjoint
/// counter ranges under the same key. A handle is single-consumer.
class RandomStream {
   public:
    explicit RandomStream(StreamSpec spec) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform() noexcept;
    /// Standard complex Gaussian: real and imaginary parts are independent
    /// N(0, 1) reals from one Marsaglia polar step.
    Complex next_complex_gaussian() noexcept;
    double next_gaussian() noexcept;

    StreamSpec spec() const noexcept { return spec_; }

   private:
    void refill() noexcept;

    StreamSpec spec_;
    std::uint64_t block_counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

RandomStream spawn_stream(StreamSpec spec) noexcept;

/// A unit vector of C^n.
class UnitSphereSample {
   public:
    const Vector &vector() const noexcept { return v_; }
    std::size_t dim() const noexcept { return v_.dim(); }

    /// Normalizes `v`; rejects vectors with norm below 1e-150.
    static UnitSphereSample from_vector(Vector v);

   private:
    explicit UnitSphereSample(Vector v) : v_(std::move(v)) {}
    Vector v_;
};

/// Draws from the normalized surface measure on the unit sphere of C^n by
/// normalizing 2n independent standard real Gaussians. Draws whose norm is
/// below 1e-150 are discarded and redrawn.
UnitSphereSample sample_unit_vector(RandomStream &stream, std::size_t n);

/// Matrix with independent standard complex Gaussian entries.
Matrix random_gaussian_matrix(RandomStream &stream, std::size_t n);

/// Random Hermitian matrix (G + G*) / 2 with G from `random_gaussian_matrix`.
Matrix random_hermitian_matrix(RandomStream &stream, std::size_t n);

}  // namespace tracekit

#endif  // TRACEKIT_SPHERE_SAMPLER_HPP
