// Copyright 2026 The allres Authors
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

// Command-line front end: `simulate`, `sweep`, `verify`.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical
// invariant violation or failed verification check.

#ifndef ALLRES_CLI_HPP
#define ALLRES_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace allres {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvariant = 2;

/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "lo:hi:n" -> n evenly spaced values.
std::vector<double> parse_grid(const std::string& text);

/// "v1,v2[,v3]" -> angles in radians.
std::vector<double> parse_thetas(const std::string& text);

}  // namespace allres

#endif  // ALLRES_CLI_HPP
