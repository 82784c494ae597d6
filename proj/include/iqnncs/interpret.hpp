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
#include <optional>
#include <string>
#include <vector>

#include "iqnncs/hybrid_model.hpp"

namespace iqnncs {

/// Attribution targets are always pre-softmax logits, evaluated in eval mode.
enum class AttributionMethod {
    SignedGradient,      // raw d logit_c / d x_j
    Saliency,            // |d logit_c / d x_j|
    GradTimesInput,      // (d logit_c / d x_j) * x_j
    IntegratedGradients,
    SmoothGrad,
};

AttributionMethod attribution_method_from_string(const std::string& s);
std::string to_string(AttributionMethod m);

struct AttributionVector {
    std::size_t instance_id = 0;
    std::size_t target_class = 0;
    std::vector<double> scores;
    std::string method;
};

/// Signed gradient of logit_c with respect to the input, via the hybrid
/// backward pass with a one-hot upstream on the logits.
std::vector<double> logit_gradient(const HybridModel& model,
                                   const std::vector<double>& x, std::size_t c);

AttributionVector saliency(const HybridModel& model, const std::vector<double>& x,
                           std::size_t c, std::size_t instance_id = 0);

AttributionVector grad_times_input(const HybridModel& model,
                                   const std::vector<double>& x, std::size_t c,
                                   std::size_t instance_id = 0);

/// Right-Riemann integrated gradients along the straight path from baseline to
/// x: IG_j = (x_j - b_j) * (1/m) * sum_{t=1..m} grad_j(b + (t/m)(x - b)).
/// Requires steps >= 8 and a baseline of matching shape.
AttributionVector integrated_gradients(const HybridModel& model,
                                       const std::vector<double>& x, std::size_t c,
                                       const std::vector<double>& baseline,
                                       std::size_t steps,
                                       std::size_t instance_id = 0);

/// Mean saliency over n_samples Gaussian-perturbed copies x + N(0, sigma^2 I).
AttributionVector smoothgrad(const HybridModel& model, const std::vector<double>& x,
                             std::size_t c, std::size_t n_samples, double sigma,
                             SeededRng& rng, std::size_t instance_id = 0);

struct OcclusionCurve {
    std::size_t predicted_class = 0;
    std::vector<std::size_t> ranking;     // feature indices, occlusion order
    std::vector<double> probabilities;    // entry k: top-k features occluded
};

/// Cumulatively replace features with the baseline value in ranking order and
/// record the softmax probability of the originally predicted class; entry 0
/// is the unoccluded probability.
OcclusionCurve occlusion_curve(const HybridModel& model,
                               const std::vector<double>& x,
                               const std::vector<std::size_t>& ranking,
                               const std::vector<double>& baseline);

/// Attribution ranking (descending |score|, ties by feature index) for use as
/// an occlusion order.
std::vector<std::size_t> attribution_ranking(const AttributionVector& attribution);

struct PrototypeMatch {
    std::size_t train_index = 0;
    std::size_t label = 0;
    double similarity = 0.0;
    bool same_class = false;
};

/// Rank training instances by cosine similarity between quantum activation
/// vectors (the Pauli-Z expectations mid-forward). Zero-norm training
/// activations are skipped with a warning; a zero-norm query is an error.
std::vector<PrototypeMatch> prototype_match(const HybridModel& model,
                                            const std::vector<double>& x,
                                            std::size_t query_label,
                                            const Dataset& train_data,
                                            std::size_t top_k);

/// Quantum activation vector of one input (eval mode).
std::vector<double> quantum_activation(const HybridModel& model,
                                       const std::vector<double>& x);

struct IcaaMatrix {
    Matrix values;              // C x C, symmetric, unit diagonal where defined
    std::vector<char> defined;  // per class; false rows/columns hold NaN
};

struct IcaaOptions {
    AttributionMethod method = AttributionMethod::SignedGradient;
    std::vector<double> ig_baseline;  // defaults to zeros
    std::size_t ig_steps = 128;
    std::size_t smoothgrad_samples = 25;
    double smoothgrad_sigma = 0.1;
    std::uint64_t smoothgrad_seed = 42;
};

/// Pairwise cosine similarity between the per-class attribution vectors of one
/// instance. Classes with an all-zero attribution are marked undefined rather
/// than silently zeroed.
IcaaMatrix icaa(const HybridModel& model, const std::vector<double>& x,
                const IcaaOptions& options = {});

struct IndecisionReport {
    std::vector<std::size_t> sample_ids;
    std::vector<double> saliency_std;
    double threshold = 0.2;
    std::vector<char> indecisive;
};

/// For each sample: std of its saliency map over n_perturb Gaussian input
/// perturbations (per-component std across perturbations, averaged over
/// components); samples above `threshold` are flagged.
IndecisionReport indecision_scan(const HybridModel& model, const Dataset& samples,
                                 std::size_t n_perturb, double sigma,
                                 double threshold, SeededRng& rng);

struct EntropyStats {
    std::vector<double> entropy;     // per sample, in [0, ln C]
    std::vector<double> bin_edges;   // n_bins + 1 edges spanning [0, ln C]
    std::vector<std::size_t> counts; // histogram over the bins
};

EntropyStats entropy_stats(const HybridModel& model, const Dataset& samples,
                           std::size_t n_bins = 20);

/// n x n cosine similarities between per-sample attribution vectors, computed
/// at each sample's predicted class (or at `fixed_class` when given).
Matrix attribution_similarity_matrix(const HybridModel& model,
                                     const Dataset& samples,
                                     AttributionMethod method,
                                     std::optional<std::size_t> fixed_class = {});

}  // namespace iqnncs
