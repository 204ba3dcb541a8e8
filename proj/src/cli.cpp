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

#include "tracekit/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "tracekit/dense_linalg.hpp"
#include "tracekit/error.hpp"
#include "tracekit/io_formats.hpp"
#include "tracekit/sphere_sampler.hpp"
#include "tracekit/trace_estimator.hpp"
#include "tracekit/trace_uniqueness.hpp"
#include "tracekit/unitary_decomp.hpp"

namespace tracekit::cli {

namespace {

constexpr double kDetOneTolerance = 1e-8;
constexpr std::size_t kSampleChunk = 4096;

struct CliConfig {
    std::uint64_t seed = 0;
    std::uint64_t samples = 100000;
    double tolerance = 1e-10;
    double z_multiplier = 3.0;
    std::optional<MatrixFormat> format;
    std::string output;
    bool raw = false;
    bool no_check = false;
    bool det_one = false;
    bool random_unitary = false;
    bool trusted = false;
    unsigned workers = 0;

    // Subcommand arguments.
    std::string matrix_path;
    std::string unitary_path;
    std::size_t dim = 0;
    std::size_t count = 1;
};

struct Result {
    Json json;
    int status;
};

EstimatorConfig estimator_config(const CliConfig &c) {
    EstimatorConfig e;
    e.z_multiplier = c.z_multiplier;
    e.workers = c.workers;
    e.trusted = c.trusted;
    return e;
}

Result cmd_estimate(const CliConfig &c) {
    const Matrix a = read_matrix_file(c.matrix_path, c.format);
    EstimateReport report = estimate_trace(LinearOperator::dense(a), c.samples, {c.seed, 0}, estimator_config(c));
    report.exact = normalized_trace_exact(a);
    if (c.raw) report = to_raw_trace(report);

    const double abs_error = std::abs(report.mean - *report.exact);
    Json j = report_to_json(report);
    j["abs_error"] = abs_error;
    const bool within = abs_error <= c.z_multiplier * report.std_error;
    return {std::move(j), (within || c.no_check) ? kSuccess : kCheckFailed};
}

Result cmd_decompose(const CliConfig &c) {
    const Matrix a = read_matrix_file(c.matrix_path, c.format);
    UnitaryDecomposition d = decompose_into_unitaries(a);
    if (c.det_one) d = rephase_decomposition(d, a);

    const double n = static_cast<double>(a.dim());
    bool ok = d.reconstruction_residual <= c.tolerance * std::max(1.0, frobenius_norm(a)) &&
              d.unitarity_residual <= c.tolerance * n;
    double max_det_error = 0.0;
    for (const Matrix &u : d.unitaries) max_det_error = std::max(max_det_error, std::abs(determinant(u) - 1.0));
    if (c.det_one) ok = ok && max_det_error <= kDetOneTolerance;

    Json j = decomposition_to_json(d);
    if (c.det_one) j["max_det_error"] = max_det_error;
    return {std::move(j), ok ? kSuccess : kCheckFailed};
}

Result cmd_uniqueness(const CliConfig &c) {
    const FunctionalSolution f = solve_unique_functional(c.dim);
    const double inv_n = 1.0 / static_cast<double>(c.dim);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < c.dim; ++i) {
        for (std::size_t j = 0; j < c.dim; ++j) {
            max_dev = std::max(max_dev, std::abs(f.values(i, j) - (i == j ? inv_n : 0.0)));
        }
    }
    const bool ok = max_dev <= c.tolerance && f.nullspace_dim == 1;
    return {functional_to_json(f), ok ? kSuccess : kCheckFailed};
}

Matrix random_unitary(std::size_t n, std::uint64_t seed) {
    RandomStream stream = spawn_stream({derive_seed(seed, 3), 0});
    const Matrix h = random_hermitian_matrix(stream, n);
    const double norm = operator_norm_hermitian(h);
    const Matrix contraction = norm > 0.0 ? (1.0 / norm) * h : h;
    return decompose_into_unitaries(contraction).unitaries.front();
}

Result cmd_check_invariance(const CliConfig &c) {
    const Matrix a = read_matrix_file(c.matrix_path, c.format);
    Matrix b = a;
    if (c.random_unitary) {
        b = random_unitary(a.dim(), c.seed);
    } else if (!c.unitary_path.empty()) {
        b = read_matrix_file(c.unitary_path, c.format);
    } else {
        throw InvalidArgument("check-invariance: pass --unitary <file> or --random-unitary");
    }
    const SubstitutionChecker checker(a, b);

    RandomStream stream = spawn_stream({c.seed, 0});
    double max_gap = 0.0;
    for (std::uint64_t k = 0; k < c.samples; ++k) {
        if (k % kSampleChunk == 0) stream = spawn_stream({c.seed, k / kSampleChunk});
        max_gap = std::max(max_gap, checker.check(sample_unit_vector(stream, a.dim())).gap);
    }
    const double bound = c.tolerance * (1.0 + frobenius_norm(a));

    Json j;
    j["n"] = a.dim();
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["unitarity_residual"] = checker.unitarity_residual();
    j["max_gap"] = max_gap;
    j["bound"] = bound;
    return {std::move(j), max_gap <= bound ? kSuccess : kCheckFailed};
}

Result cmd_sample(const CliConfig &c) {
    if (c.dim == 0) throw InvalidArgument("sample: --dim must be at least 1");
    std::vector<UnitSphereSample> samples;
    samples.reserve(c.count);
    RandomStream stream = spawn_stream({c.seed, 0});
    for (std::size_t k = 0; k < c.count; ++k) {
        if (k % kSampleChunk == 0) stream = spawn_stream({c.seed, k / kSampleChunk});
        samples.push_back(sample_unit_vector(stream, c.dim));
    }
    return {samples_to_json(samples), kSuccess};
}

void add_global_options(CLI::App &app, CliConfig &c) {
    const std::map<std::string, MatrixFormat> formats{{"mm", MatrixFormat::matrix_market},
                                                      {"json", MatrixFormat::json}};
    app.add_option("--seed", c.seed, "Master seed for every random stream")->capture_default_str();
    app.add_option("--samples", c.samples, "Number of Monte Carlo samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tolerance", c.tolerance, "Tolerance for numerical checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--z", c.z_multiplier, "Confidence multiplier on the standard error")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--format", c.format, "Input matrix format (detected when omitted)")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--output", c.output, "Write JSON to this file instead of stdout");
    app.add_option("--workers", c.workers, "Estimator worker threads (0 = hardware concurrency)");
    app.add_flag("--raw", c.raw, "Report the raw trace instead of the normalized trace");
    app.add_flag("--no-check", c.no_check, "Exit 0 even when the estimate misses the exact value");
    app.add_flag("--det-one", c.det_one, "Rephase every unitary to determinant 1");
    app.add_flag("--random-unitary", c.random_unitary, "Draw B at random for check-invariance");
    app.add_flag("--trusted", c.trusted, "Skip linearity probes for matrix-free operators");
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Randomized normalized-trace estimation and certificates", "tracekit"};
    app.require_subcommand(1);
    app.fallthrough();

    CliConfig config;
    add_global_options(app, config);

    auto *estimate = app.add_subcommand("estimate", "Monte Carlo normalized trace of a matrix");
    estimate->add_option("matrix", config.matrix_path, "Matrix file")->required();

    auto *decompose = app.add_subcommand("decompose", "Write a matrix as a combination of unitaries");
    decompose->add_option("matrix", config.matrix_path, "Matrix file")->required();

    auto *uniqueness = app.add_subcommand("uniqueness", "Certify the normalized trace is the unique tracial state");
    uniqueness->add_option("--dim", config.dim, "Matrix dimension")->required();

    auto *invariance = app.add_subcommand("check-invariance", "Check <AB(B*z), B*z> = <BAz, z> on random z");
    invariance->add_option("matrix", config.matrix_path, "Matrix A file")->required();
    invariance->add_option("--unitary", config.unitary_path, "Unitary B file");

    auto *sample = app.add_subcommand("sample", "Draw uniform unit vectors of C^n");
    sample->add_option("--dim", config.dim, "Vector dimension")->required();
    sample->add_option("--count", config.count, "Number of vectors")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kSuccess;
        }
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    Result result;
    try {
        if (estimate->parsed()) {
            result = cmd_estimate(config);
        } else if (decompose->parsed()) {
            result = cmd_decompose(config);
        } else if (uniqueness->parsed()) {
            result = cmd_uniqueness(config);
        } else if (invariance->parsed()) {
            result = cmd_check_invariance(config);
        } else {
            result = cmd_sample(config);
        }
    } catch (const NumericalFailure &e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    const std::string text = format_json(result.json);
    if (config.output.empty()) {
        out << text;
    } else {
        std::ofstream file(config.output, std::ios::binary);
        if (!(file << text)) {
            err << "error: cannot write '" << config.output << "'\n";
            return kUsageError;
        }
    }
    return result.status;
}

}  // namespace tracekit::cli
