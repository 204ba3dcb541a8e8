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

#ifndef TRACEKIT_TRACE_ESTIMATOR_HPP
#define TRACEKIT_TRACE_ESTIMATOR_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "tracekit/dense_linalg.hpp"
#include "tracekit/sphere_sampler.hpp"

namespace tracekit {

/// A linear map on C^n known through its action on vectors.
///
/// `apply` may be invoked concurrently on distinct inputs.
class LinearOperator {
   public:
    using ApplyFn = std::function<Vector(const Vector &)>;

    /// Wraps a stored matrix. Dense operators are linear by construction.
    static LinearOperator dense(Matrix a);
    /// Wraps a user callback; estimate_trace spot-checks its linearity
    /// unless the estimator is configured as trusted.
    static LinearOperator matrix_free(std::size_t dim, ApplyFn apply);

    std::size_t dim() const noexcept { return dim_; }
    bool is_matrix_free() const noexcept { return matrix_free_; }
    Vector apply(const Vector &x) const;

   private:
    LinearOperator(std::size_t dim, ApplyFn apply, bool matrix_free)
        : dim_(dim), apply_(std::move(apply)), matrix_free_(matrix_free) {}

    std::size_t dim_;
    ApplyFn apply_;
    bool matrix_free_;
};

/// Checks apply(a*u + b*v) == a*apply(u) + b*apply(v) on `probes` random
/// inputs, relative tolerance 1e-10. Throws InvalidArgument on violation.
void check_linearity(const LinearOperator &op, RandomStream &stream, int probes = 3);

/// Streaming mean and split real/imaginary sums of squared deviations.
struct RunningStats {
    std::uint64_t count = 0;
    Complex mean = 0.0;
    double m2_re = 0.0;
    double m2_im = 0.0;

    void add(Complex value) noexcept;
    /// sqrt((m2_re + m2_im) / (count - 1)), 0 for count <= 1.
    double sample_stddev() const noexcept;
};

/// Pairwise (Chan) combination; `merge_stats(x, {}) == x`.
RunningStats merge_stats(const RunningStats &a, const RunningStats &b) noexcept;

struct EstimatorConfig {
    /// Sample j comes from stream_index base + j / chunk_size.
    std::size_t chunk_size = 4096;
    double z_multiplier = 3.0;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Skip the linearity spot-check for matrix-free operators.
    bool trusted = false;
};

struct EstimateReport {
    std::size_t dim = 0;
    std::uint64_t sample_count = 0;
    Complex mean = 0.0;
    double std_error = 0.0;
    Complex ci_center = 0.0;
    double ci_radius = 0.0;
    StreamSpec seed;
    std::optional<Complex> exact;

    friend bool operator==(const EstimateReport &, const EstimateReport &) = default;
};

/// Rescales a normalized-trace report to the raw trace (factor n).
EstimateReport to_raw_trace(EstimateReport report);

/// The numerical value <Ax, x> (conjugate-linear in the second slot).
///
/// Evaluated as <Ax, x> / <x, x>; the divisor is 1 up to rounding, and
/// dividing by it makes A = I yield exactly 1.
Complex numerical_value(const LinearOperator &op, const UnitSphereSample &x);

/// Monte Carlo estimate of the normalized trace (1/n) tr A as the mean of
/// <Ax, x> over uniform unit vectors.
///
/// Samples are grouped in chunks of `config.chunk_size`; chunk c draws from
/// StreamSpec{spec.master_seed, spec.stream_index + c}. Chunks run on a
/// worker pool and their statistics are merged left-to-right by chunk index,
/// so the report is independent of the worker count.
EstimateReport estimate_trace(const LinearOperator &op, std::uint64_t n_samples, StreamSpec spec,
                              const EstimatorConfig &config = {});

struct SubstitutionCheck {
    Complex lhs;
    Complex rhs;
    double gap;
};

/// Evaluates <AB(B* z), B* z> and <BA z, z> for unitary B. The two agree
/// identically because x = B* z is a measure-preserving change of variables.
SubstitutionCheck substitution_identity_check(const Matrix &a, const Matrix &b, const UnitSphereSample &z);

/// substitution_identity_check with AB, BA and B* formed once, for many z.
/// Construction rejects ||B*B - I||_F > 1e-10 and mismatched dimensions.
class SubstitutionChecker {
   public:
    SubstitutionChecker(const Matrix &a, const Matrix &b);

    SubstitutionCheck check(const UnitSphereSample &z) const;
    std::size_t dim() const noexcept { return ab_.dim(); }
    double unitarity_residual() const noexcept { return unitarity_residual_; }

   private:
    Matrix ab_;
    Matrix ba_;
    Matrix b_star_;
    double unitarity_residual_;
};

struct CommutationEstimates {
    EstimateReport ab;
    EstimateReport ba;
};

/// Estimates tr(AB) and tr(BA) from independent streams. The BA estimate
/// uses the master seed derived by `derive_seed(spec.master_seed, 1)`.
CommutationEstimates commutation_estimate_check(const Matrix &a, const Matrix &b, std::uint64_t n_samples,
                                                StreamSpec spec, const EstimatorConfig &config = {});

/// SplitMix64 mixing of (seed, salt) into a fresh master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

}  // namespace tracekit

#endif  // TRACEKIT_TRACE_ESTIMATOR_HPP
