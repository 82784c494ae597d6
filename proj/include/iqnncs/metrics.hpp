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

#include <cstddef>
#include <vector>

#include "iqnncs/numerics.hpp"

namespace iqnncs {

struct EvaluationReport {
    Matrix confusion;  // rows = true class, cols = predicted class, counts
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::size_t n_test = 0;
};

/// F1 = 2PR / (P + R), 0 when both P and R are 0.
double f1_score(double precision, double recall);

/// Multiclass confusion matrix and one-vs-rest precision/recall/F1 per class.
/// A class never predicted (or never true) gets precision (or recall) 0 with
/// a warning, keeping macro F1 total.
EvaluationReport compute_metrics(const std::vector<std::size_t>& truth,
                                 const std::vector<std::size_t>& predicted,
                                 std::size_t n_classes);

}  // namespace iqnncs
