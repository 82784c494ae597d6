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

#include "iqnncs/data.hpp"
#include "iqnncs/hybrid_model.hpp"

namespace iqnncs {

/// One reproducibility artifact per run: every knob of the pipeline, loadable
/// from a single JSON document. Command-line flags override file values, the
/// IQNNCS_SEED environment variable is the seed fallback.
struct RunConfig {
    // data
    std::string data_csv;
    std::string schema_path;
    // preprocessing
    std::size_t pca_components = 6;
    Balancing balancing = Balancing::None;
    std::size_t smote_k = 5;
    double f_train = 0.70;
    double f_val = 0.15;
    double f_test = 0.15;
    // model
    CircuitConfig circuit;       // 6 qubits, 4 layers, Y embedding
    std::size_t post_hidden = 16;
    double dropout = 0.2;
    // training
    TrainConfig training;
    // interpretability
    std::size_t ig_steps = 128;
    std::size_t smoothgrad_samples = 25;
    double smoothgrad_sigma = 0.1;
    std::size_t indecision_perturbations = 20;
    double indecision_sigma = 0.1;
    double indecision_threshold = 0.2;
    double occlusion_baseline = 0.0;  // standardized feature mean
    std::size_t prototype_top_k = 5;
    double tsne_perplexity = 30.0;
    std::size_t tsne_iterations = 500;
    // run
    std::uint64_t seed = 42;
    std::string out = "run";

    /// Merge values from a JSON config file over the current settings.
    void load_file(const std::string& path);
    /// Propagate the run seed into every seeded sub-config.
    void sync_seed();
};

}  // namespace iqnncs
