// Copyright 2026 The iqnncs Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <string>
#include <vector>

namespace iqnncs {

/// Batch front end. Subcommands: synth, preprocess, train, evaluate, explain,
/// embed, report. Returns 0 on success, 2 on usage errors (with usage text),
/// 1 with a one-line diagnostic on anything else. Exposed as a function so
/// tests can drive whole pipelines in-process.
int run_cli(const std::vector<std::string>& args);

}  // namespace iqnncs
