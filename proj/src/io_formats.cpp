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

#include "tracekit/io_formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tracekit/error.hpp"

namespace tracekit {

namespace {

enum class MmLayout { array, coordinate };
enum class MmField { real, integer, complex };
enum class MmSymmetry { general, symmetric, hermitian };

struct MmHeader {
    MmLayout layout;
    MmField field;
    MmSymmetry symmetry;
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

// Line cursor over the text that tracks 1-based line numbers.
class LineReader {
   public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view &line) {
        if (pos_ >= text_.size()) return false;
        const std::size_t end = text_.find('\n', pos_);
        const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
        line = text_.substr(pos_, stop - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = stop + 1;
        ++line_no_;
        return true;
    }

    // Next line that is neither blank nor a '%' comment.
    bool next_content(std::string_view &line) {
        while (next(line)) {
            const auto tokens = split_ws(line);
            if (tokens.empty() || tokens.front().front() == '%') continue;
            return true;
        }
        return false;
    }

    std::size_t line_no() const noexcept { return line_no_; }

   private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

double parse_double(std::string_view token, std::size_t line) {
    double value = 0.0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError("invalid number '" + std::string(token) + "'", line);
    }
    return value;
}

double parse_integer_value(std::string_view token, std::size_t line) {
    long long value = 0;
    const char *first = token.data();
    const char *last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("invalid integer '" + std::string(token) + "'", line);
    return static_cast<double>(value);
}

std::size_t parse_size(std::string_view token, std::size_t line) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("invalid size '" + std::string(token) + "'", line);
    }
    return value;
}

MmHeader parse_header(std::string_view line) {
    const auto tokens = split_ws(line);
    if (tokens.size() != 5 || lower(tokens[0]) != "%%matrixmarket" || lower(tokens[1]) != "matrix") {
        throw ParseError("expected header '%%MatrixMarket matrix <format> <field> <symmetry>'", 1);
    }
    MmHeader h{};
    const std::string layout = lower(tokens[2]);
    if (layout == "array") {
        h.layout = MmLayout::array;
    } else if (layout == "coordinate") {
        h.layout = MmLayout::coordinate;
    } else {
        throw ParseError("unsupported format '" + std::string(tokens[2]) + "'", 1);
    }
    const std::string field = lower(tokens[3]);
    if (field == "real") {
        h.field = MmField::real;
    } else if (field == "integer") {
        h.field = MmField::integer;
    } else if (field == "complex") {
        h.field = MmField::complex;
    } else {
        throw ParseError("unsupported field '" + std::string(tokens[3]) + "'", 1);
    }
    const std::string symmetry = lower(tokens[4]);
    if (symmetry == "general") {
        h.symmetry = MmSymmetry::general;
    } else if (symmetry == "symmetric") {
        h.symmetry = MmSymmetry::symmetric;
    } else if (symmetry == "hermitian") {
        h.symmetry = MmSymmetry::hermitian;
    } else {
        throw ParseError("unsupported symmetry '" + std::string(tokens[4]) + "'", 1);
    }
    return h;
}

Complex parse_value(const MmHeader &h, std::span<const std::string_view> tokens, std::size_t line) {
    const std::size_t expected = h.field == MmField::complex ? 2 : 1;
    if (tokens.size() != expected) {
        throw ParseError("expected " + std::to_string(expected) + " value(s), found " + std::to_string(tokens.size()),
                         line);
    }
    switch (h.field) {
        case MmField::integer:
            return parse_integer_value(tokens[0], line);
        case MmField::real:
            return parse_double(tokens[0], line);
        case MmField::complex:
            break;
    }
    return {parse_double(tokens[0], line), parse_double(tokens[1], line)};
}

// Stores v at (i, j) and its mirror as dictated by the symmetry.
void place(Matrix &m, const MmHeader &h, std::size_t i, std::size_t j, Complex v, std::size_t line) {
    if (h.symmetry != MmSymmetry::general && i < j) {
        throw ParseError("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                             ") lies above the diagonal in symmetric storage",
                         line);
    }
    if (h.symmetry == MmSymmetry::hermitian && i == j && v.imag() != 0.0) {
        throw ParseError("hermitian diagonal entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                             ") has a nonzero imaginary part",
                         line);
    }
    m(i, j) += v;
    if (i != j) {
        if (h.symmetry == MmSymmetry::symmetric) m(j, i) += v;
        if (h.symmetry == MmSymmetry::hermitian) m(j, i) += std::conj(v);
    }
}

std::string format_double(double v, const char *fmt) {
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void format_json_into(const Json &j, std::string &out, int indent) {
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto &[key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out.append(static_cast<std::size_t>(indent + 2), ' ');
                out += Json(key).dump();
                out += ": ";
                format_json_into(value, out, indent + 2);
            }
            out += "\n";
            out.append(static_cast<std::size_t>(indent), ' ');
            out += "}";
            return;
        }
        case Json::value_t::array: {
            out += "[";
            bool first = true;
            for (const auto &value : j) {
                if (!first) out += ", ";
                first = false;
                format_json_into(value, out, indent);
            }
            out += "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>(), "%.17g");
            return;
        default:
            out += j.dump();
            return;
    }
}

const Json &require_key(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'", 0);
    return j.at(key);
}

}  // namespace

Matrix parse_matrix_market(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    if (!reader.next(line)) throw ParseError("empty input", 1);
    const MmHeader h = parse_header(line);

    if (!reader.next_content(line)) throw ParseError("missing size line", reader.line_no());
    const std::size_t size_line = reader.line_no();
    const auto size_tokens = split_ws(line);
    const std::size_t want_tokens = h.layout == MmLayout::array ? 2 : 3;
    if (size_tokens.size() != want_tokens) {
        throw ParseError("size line must have " + std::to_string(want_tokens) + " fields", size_line);
    }
    const std::size_t rows = parse_size(size_tokens[0], size_line);
    const std::size_t cols = parse_size(size_tokens[1], size_line);
    if (rows == 0 || rows != cols) {
        throw ParseError("matrix must be square and nonempty, got " + std::to_string(rows) + " x " +
                             std::to_string(cols),
                         size_line);
    }
    const std::size_t n = rows;
    Matrix m(n);

    std::size_t expected = 0;
    if (h.layout == MmLayout::array) {
        expected = h.symmetry == MmSymmetry::general ? n * n : n * (n + 1) / 2;
    } else {
        expected = parse_size(size_tokens[2], size_line);
    }

    // Column-major traversal for array storage (lower triangle when symmetric).
    std::size_t col = 0;
    std::size_t row = 0;
    std::size_t count = 0;
    while (reader.next_content(line)) {
        const std::size_t ln = reader.line_no();
        if (count == expected) {
            throw ParseError("entry count mismatch: more than the declared " + std::to_string(expected) + " entries",
                             ln);
        }
        const auto tokens = split_ws(line);
        if (h.layout == MmLayout::array) {
            place(m, h, row, col, parse_value(h, tokens, ln), ln);
            if (++row == n) {
                ++col;
                row = h.symmetry == MmSymmetry::general ? 0 : col;
            }
        } else {
            if (tokens.size() < 2) throw ParseError("coordinate entry needs row and column indices", ln);
            const std::size_t i = parse_size(tokens[0], ln);
            const std::size_t j = parse_size(tokens[1], ln);
            if (i < 1 || i > n || j < 1 || j > n) {
                throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range for " +
                                     std::to_string(n) + " x " + std::to_string(n),
                                 ln);
            }
            place(m, h, i - 1, j - 1, parse_value(h, std::span(tokens).subspan(2), ln), ln);
        }
        ++count;
    }
    if (count != expected) {
        throw ParseError("entry count mismatch: declared " + std::to_string(expected) + " entries, found " +
                             std::to_string(count),
                         reader.line_no());
    }
    return m;
}

std::string write_matrix_market(const Matrix &a) {
    const std::size_t n = a.dim();
    std::string out = "%%MatrixMarket matrix array complex general\n";
    out += std::to_string(n) + " " + std::to_string(n) + "\n";
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            out += format_double(a(i, j).real(), "%.16e");
            out += ' ';
            out += format_double(a(i, j).imag(), "%.16e");
            out += '\n';
        }
    }
    return out;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("complex entries must be [re, im] pairs of numbers", 0);
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix &a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(complex_to_json(a(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) throw ParseError("dense matrix must be a nonempty array of rows", 0);
    const std::size_t n = j.size();
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Json &row = j[i];
        if (!row.is_array() || row.size() != n) {
            throw ParseError("row " + std::to_string(i) + " must hold " + std::to_string(n) +
                                 " entries (matrix must be square, rows may not be ragged)",
                             0);
        }
        for (const Json &z : row) entries.push_back(complex_from_json(z));
    }
    try {
        return Matrix(n, std::move(entries));
    } catch (const InvalidArgument &e) {
        throw ParseError(e.what(), 0);
    }
}

Matrix parse_json_dense(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    return matrix_from_json(j);
}

Json report_to_json(const EstimateReport &r) {
    Json j;
    j["n"] = r.dim;
    j["samples"] = r.sample_count;
    j["mean"] = complex_to_json(r.mean);
    j["stderr"] = r.std_error;
    j["ci_radius"] = r.ci_radius;
    j["seed"] = r.seed.master_seed;
    j["exact"] = r.exact ? complex_to_json(*r.exact) : Json(nullptr);
    return j;
}

EstimateReport report_from_json(const Json &j) {
    EstimateReport r;
    try {
        r.dim = require_key(j, "n").get<std::size_t>();
        r.sample_count = require_key(j, "samples").get<std::uint64_t>();
        r.mean = complex_from_json(require_key(j, "mean"));
        r.std_error = require_key(j, "stderr").get<double>();
        r.ci_center = r.mean;
        r.ci_radius = require_key(j, "ci_radius").get<double>();
        r.seed = {require_key(j, "seed").get<std::uint64_t>(), 0};
        const Json &exact = require_key(j, "exact");
        if (!exact.is_null()) r.exact = complex_from_json(exact);
    } catch (const Json::exception &e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    }
    return r;
}

std::string write_report_json(const EstimateReport &r) { return format_json(report_to_json(r)); }

EstimateReport parse_report_json(std::string_view text) {
    try {
        return report_from_json(Json::parse(text));
    } catch (const Json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
}

Json decomposition_to_json(const UnitaryDecomposition &d) {
    Json terms = Json::array();
    for (std::size_t k = 0; k < d.unitaries.size(); ++k) {
        Json t;
        t["coefficient"] = complex_to_json(d.coefficients[k]);
        t["unitary"] = matrix_to_json(d.unitaries[k]);
        t["det"] = complex_to_json(determinant(d.unitaries[k]));
        terms.push_back(std::move(t));
    }
    Json j;
    j["terms"] = std::move(terms);
    j["reconstruction_residual"] = d.reconstruction_residual;
    j["unitarity_residual"] = d.unitarity_residual;
    return j;
}

Json functional_to_json(const FunctionalSolution &f) {
    Json j;
    j["dim"] = f.dim;
    j["solution"] = matrix_to_json(f.values);
    j["nullspace_dim"] = f.nullspace_dim;
    j["residual"] = f.residual;
    return j;
}

Json samples_to_json(const std::vector<UnitSphereSample> &samples) {
    Json out = Json::array();
    for (const auto &s : samples) {
        Json v = Json::array();
        for (Complex z : s.vector().entries()) v.push_back(complex_to_json(z));
        out.push_back(std::move(v));
    }
    return out;
}

std::string format_json(const Json &j) {
    std::string out;
    format_json_into(j, out, 0);
    out += '\n';
    return out;
}

MatrixFormat detect_format(std::string_view text) {
    constexpr std::string_view kBanner = "%%matrixmarket";
    if (text.size() >= kBanner.size() && lower(text.substr(0, kBanner.size())) == kBanner) {
        return MatrixFormat::matrix_market;
    }
    return MatrixFormat::json;
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error("error reading '" + path.string() + "'");
    return ss.str();
}

Matrix read_matrix_file(const std::filesystem::path &path, std::optional<MatrixFormat> format) {
    const std::string text = read_text_file(path);
    const MatrixFormat f = format.value_or(detect_format(text));
    return f == MatrixFormat::matrix_market ? parse_matrix_market(text) : parse_json_dense(text);
}

}  // namespace tracekit
