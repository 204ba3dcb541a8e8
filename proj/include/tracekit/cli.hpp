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

#ifndef TRACEKIT_CLI_HPP
#define TRACEKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tracekit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,  // bad flags, unreadable or unparseable input
    kCheckFailed = 2, // a numerical check did not meet its tolerance
};

/// Runs the command line `args` (args[0] is the program name). JSON goes to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace tracekit::cli

#endif  // TRACEKIT_CLI_HPP
