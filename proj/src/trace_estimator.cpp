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

#include "tracekit/trace_estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "tracekit/error.hpp"

namespace tracekit {

namespace {

constexpr double kLinearityTolerance = 1e-10;
constexpr double kUnitaryTolerance = 1e-10;

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Vector random_gaussian_vector(RandomStream &stream, std::size_t n) {
    Vector v(n);
    for (Complex &z : v.entries()) z = stream.next_complex_gaussian();
    return v;
}

double vector_gap(const Vector &a, const Vector &b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc);
}

RunningStats accumulate_chunk(const LinearOperator &op, RandomStream stream, std::uint64_t first_index,
                              std::uint64_t count) {
    RunningStats stats;
    for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t index = first_index + k;
        const UnitSphereSample x = sample_unit_vector(stream, op.dim());
        Complex value;
        try {
            value = numerical_value(op, x);
        } catch (const Error &e) {
            throw NumericalFailure("estimate_trace: sample " + std::to_string(index) + ": " + e.what());
        }
        if (!is_finite(value)) {
            throw NumericalFailure("estimate_trace: non-finite numerical value at sample " + std::to_string(index));
        }
        stats.add(value);
    }
    return stats;
}

}  // namespace

LinearOperator LinearOperator::dense(Matrix a) {
    const std::size_t n = a.dim();
    auto m = std::make_shared<const Matrix>(std::move(a));
    return LinearOperator(n, [m](const Vector &x) { return *m * x; }, false);
}

LinearOperator LinearOperator::matrix_free(std::size_t dim, ApplyFn apply) {
    if (dim == 0) throw InvalidArgument("LinearOperator: dimension must be at least 1");
    if (!apply) throw InvalidArgument("LinearOperator: empty apply callback");
    return LinearOperator(dim, std::move(apply), true);
}

Vector LinearOperator::apply(const Vector &x) const {
    if (x.dim() != dim_) {
        throw InvalidArgument("LinearOperator: input dimension " + std::to_string(x.dim()) + ", expected " +
                              std::to_string(dim_));
    }
    Vector y = apply_(x);
    if (y.dim() != dim_) {
        throw InvalidArgument("LinearOperator: output dimension " + std::to_string(y.dim()) + ", expected " +
                              std::to_string(dim_));
    }
    return y;
}

void check_linearity(const LinearOperator &op, RandomStream &stream, int probes) {
    const std::size_t n = op.dim();
    for (int p = 0; p < probes; ++p) {
        const Vector u = random_gaussian_vector(stream, n);
        const Vector v = random_gaussian_vector(stream, n);
        const Complex alpha = stream.next_complex_gaussian();
        const Complex beta = stream.next_complex_gaussian();

        const Vector au = op.apply(u);
        const Vector av = op.apply(v);
        const Vector lhs = op.apply(alpha * u + beta * v);
        const Vector rhs = alpha * au + beta * av;
        const double scale = std::max(1.0, std::abs(alpha) * norm2(au) + std::abs(beta) * norm2(av));
        const double gap = vector_gap(lhs, rhs);
        if (!(gap <= kLinearityTolerance * scale)) {
            throw InvalidArgument("LinearOperator: linearity probe " + std::to_string(p) + " failed, gap " +
                                  std::to_string(gap));
        }
    }
}

void RunningStats::add(Complex value) noexcept {
    ++count;
    const Complex delta = value - mean;
    mean += delta / static_cast<double>(count);
    const Complex delta2 = value - mean;
    m2_re += delta.real() * delta2.real();
    m2_im += delta.imag() * delta2.imag();
}

double RunningStats::sample_stddev() const noexcept {
    if (count <= 1) return 0.0;
    return std::sqrt((m2_re + m2_im) / static_cast<double>(count - 1));
}

RunningStats merge_stats(const RunningStats &a, const RunningStats &b) noexcept {
    if (b.count == 0) return a;
    if (a.count == 0) return b;
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double n = na + nb;
    const Complex delta = b.mean - a.mean;
    RunningStats out;
    out.count = a.count + b.count;
    out.mean = a.mean + delta * (nb / n);
    const double w = na * nb / n;
    out.m2_re = a.m2_re + b.m2_re + delta.real() * delta.real() * w;
    out.m2_im = a.m2_im + b.m2_im + delta.imag() * delta.imag() * w;
    return out;
}

EstimateReport to_raw_trace(EstimateReport report) {
    const double n = static_cast<double>(report.dim);
    report.mean *= n;
    report.std_error *= n;
    report.ci_center *= n;
    report.ci_radius *= n;
    if (report.exact) *report.exact *= n;
    return report;
}

Complex numerical_value(const LinearOperator &op, const UnitSphereSample &x) {
    if (op.dim() != x.dim()) {
        throw InvalidArgument("numerical_value: operator dimension " + std::to_string(op.dim()) +
                              " does not match sample dimension " + std::to_string(x.dim()));
    }
    const Vector &v = x.vector();
    return inner(op.apply(v), v) / inner(v, v).real();
}

EstimateReport estimate_trace(const LinearOperator &op, std::uint64_t n_samples, StreamSpec spec,
                              const EstimatorConfig &config) {
    if (n_samples == 0) throw InvalidArgument("estimate_trace: sample count must be positive");
    if (config.chunk_size == 0) throw InvalidArgument("estimate_trace: chunk size must be positive");
    if (!(config.z_multiplier > 0.0) || !std::isfinite(config.z_multiplier)) {
        throw InvalidArgument("estimate_trace: z multiplier must be positive and finite");
    }

    if (op.is_matrix_free() && !config.trusted) {
        RandomStream probe_stream({derive_seed(spec.master_seed, 2), spec.stream_index});
        check_linearity(op, probe_stream);
    }

    const std::uint64_t chunk = config.chunk_size;
    const std::uint64_t n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<RunningStats> partials(n_chunks);
    std::vector<std::exception_ptr> errors(n_chunks);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) {
            const std::uint64_t first = c * chunk;
            const std::uint64_t count = std::min(chunk, n_samples - first);
            try {
                partials[c] = accumulate_chunk(op, spawn_stream({spec.master_seed, spec.stream_index + c}), first, count);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };

    unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (const auto &err : errors) {
        if (err) std::rethrow_exception(err);
    }

    RunningStats total;
    for (const auto &p : partials) total = merge_stats(total, p);

    EstimateReport report;
    report.dim = op.dim();
    report.sample_count = total.count;
    report.mean = total.mean;
    report.std_error = total.sample_stddev() / std::sqrt(static_cast<double>(total.count));
    report.ci_center = total.mean;
    report.ci_radius = config.z_multiplier * report.std_error;
    report.seed = spec;
    return report;
}

SubstitutionChecker::SubstitutionChecker(const Matrix &a, const Matrix &b)
    : ab_(a * b), ba_(b * a), b_star_(adjoint(b)), unitarity_residual_(tracekit::unitarity_residual(b)) {
    if (!(unitarity_residual_ <= kUnitaryTolerance)) {
        throw InvalidArgument("substitution_identity_check: B is not unitary, ||B*B - I||_F = " +
                              std::to_string(unitarity_residual_));
    }
}

SubstitutionCheck SubstitutionChecker::check(const UnitSphereSample &z) const {
    if (z.dim() != dim()) throw InvalidArgument("substitution_identity_check: dimension mismatch");
    const Vector x = b_star_ * z.vector();
    const Complex lhs = inner(ab_ * x, x);
    const Complex rhs = inner(ba_ * z.vector(), z.vector());
    return {lhs, rhs, std::abs(lhs - rhs)};
}

SubstitutionCheck substitution_identity_check(const Matrix &a, const Matrix &b, const UnitSphereSample &z) {
    if (a.dim() != b.dim() || a.dim() != z.dim()) {
        throw InvalidArgument("substitution_identity_check: dimension mismatch");
    }
    return SubstitutionChecker(a, b).check(z);
}

CommutationEstimates commutation_estimate_check(const Matrix &a, const Matrix &b, std::uint64_t n_samples,
                                                StreamSpec spec, const EstimatorConfig &config) {
    if (a.dim() != b.dim()) throw InvalidArgument("commutation_estimate_check: dimension mismatch");
    const Matrix ab = a * b;
    const Matrix ba = b * a;
    const Complex exact_ab = normalized_trace_exact(ab);
    const Complex exact_ba = normalized_trace_exact(ba);

    CommutationEstimates out{
        estimate_trace(LinearOperator::dense(ab), n_samples, spec, config),
        estimate_trace(LinearOperator::dense(ba), n_samples, {derive_seed(spec.master_seed, 1), spec.stream_index},
                       config)};
    out.ab.exact = exact_ab;
    out.ba.exact = exact_ba;
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace tracekit
