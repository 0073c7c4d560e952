/*
 * Copyright 2026 The Springback Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Command-line front end. Kept as a library so tests can drive it with
// argument vectors and captured streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace springback::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The six toy-profile noise thresholds in the order l1, l0.2, l0.5, l0.999,
/// TL1 (beta = 1), l1-2.
struct ToyRow {
  std::string label;
  double threshold;
  bool condition_holds;
};
std::vector<ToyRow> toy_thresholds();

}  // namespace springback::cli
