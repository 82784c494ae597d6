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
#include <cstdint>
#include <vector>

#include "iqnncs/numerics.hpp"

namespace iqnncs {

struct TsneConfig {
    double perplexity = 30.0;
    std::size_t iterations = 500;
    /// 0 means auto: max(50, n / early_exaggeration), which keeps the late
    /// optimization phase stable on small inputs.
    double learning_rate = 0.0;
    double early_exaggeration = 12.0;
    /// Exaggeration and the low starting momentum both end here.
    std::size_t exaggeration_iters = 125;
    double momentum_start = 0.5;
    double momentum_final = 0.8;
    std::uint64_t seed = 42;
};

struct Embedding2D {
    Matrix coords;                    // n x 2
    std::vector<std::size_t> labels;  // true labels carried through
    std::vector<double> kl_history;   // KL(P||Q) per iteration, true P
};

/// Exact (dense) t-SNE of row vectors: Gaussian conditional distributions
/// calibrated to the target perplexity by bisection, symmetrized P, Student-t
/// Q, and momentum gradient descent with adaptive gains and an early
/// exaggeration phase. Deterministic for a fixed config.
///
/// If n < 3 * perplexity + 1 the perplexity is reduced to (n-1)/3 with a
/// warning. All-identical inputs are rejected.
Embedding2D tsne_embed(const Matrix& activations,
                       const std::vector<std::size_t>& labels,
                       const TsneConfig& config = {});

}  // namespace iqnncs
