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

#ifndef TRACEKIT_IO_FORMATS_HPP
#define TRACEKIT_IO_FORMATS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tracekit/dense_linalg.hpp"
#include "tracekit/sphere_sampler.hpp"
#include "tracekit/trace_estimator.hpp"
#include "tracekit/trace_uniqueness.hpp"
#include "tracekit/unitary_decomp.hpp"

namespace tracekit {

using Json = nlohmann::ordered_json;

enum class MatrixFormat { matrix_market, json };

/// Matrix Market reader for square matrices.
///
/// Supported: `matrix array|coordinate` with field real, integer or complex
/// and symmetry general, symmetric or hermitian. Symmetric and hermitian
/// files store the lower triangle; the mirror of (i, j) is a(i, j) or
/// conj(a(i, j)) respectively. Hermitian diagonals must be real. Duplicate
/// coordinate entries are summed.
Matrix parse_matrix_market(std::string_view text);

/// Array format, complex general, 17 significant digits, column-major.
std::string write_matrix_market(const Matrix &a);

/// Nested arrays of [re, im] pairs, one inner array per row.
Matrix parse_json_dense(std::string_view text);
Matrix matrix_from_json(const Json &j);
Json matrix_to_json(const Matrix &a);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json &j);

/// Schema: {"n", "samples", "mean": [re, im], "stderr", "ci_radius",
/// "seed", "exact": [re, im] | null}.
Json report_to_json(const EstimateReport &r);
EstimateReport report_from_json(const Json &j);
std::string write_report_json(const EstimateReport &r);
EstimateReport parse_report_json(std::string_view text);

/// {"terms": [{"coefficient", "unitary", "det"}...], "reconstruction_residual",
/// "unitarity_residual"}.
Json decomposition_to_json(const UnitaryDecomposition &d);

/// {"dim", "solution", "nullspace_dim", "residual"}.
Json functional_to_json(const FunctionalSolution &f);

Json samples_to_json(const std::vector<UnitSphereSample> &samples);

/// Deterministic rendering: keys in insertion order, two-space indented
/// objects, arrays on one line, doubles printed with 17 significant digits.
std::string format_json(const Json &j);

/// Picks Matrix Market when the text starts with "%%MatrixMarket".
MatrixFormat detect_format(std::string_view text);

std::string read_text_file(const std::filesystem::path &path);

/// Reads and parses a matrix file; the format is detected when not given.
Matrix read_matrix_file(const std::filesystem::path &path, std::optional<MatrixFormat> format = std::nullopt);

}  // namespace tracekit

#endif  // TRACEKIT_IO_FORMATS_HPP
