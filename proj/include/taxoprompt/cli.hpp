// Copyright 2026 The taxoprompt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The taxoprompt command line: induce, score, evaluate, analyze, sweep.

#ifndef TAXOPROMPT_CLI_HPP_
#define TAXOPROMPT_CLI_HPP_

#include <iosfwd>

namespace taxoprompt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// `in` feeds `score --input -`.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace taxoprompt

#endif  // TAXOPROMPT_CLI_HPP_
