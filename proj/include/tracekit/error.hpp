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

#ifndef TRACEKIT_ERROR_HPP
#define TRACEKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tracekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad index, non-Hermitian
/// matrix, non-unitary matrix, zero sample count, ...).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// A numerical procedure did not reach its contract (eigensolver
/// non-convergence, non-finite sample, unexpected rank).
class NumericalFailure : public Error {
   public:
    using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
   public:
    ParseError(const std::string &what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

}  // namespace tracekit

#endif  // TRACEKIT_ERROR_HPP
