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

/// Fully connected layer, weights are (out x in).
struct DenseLayer {
    Matrix weights;
    std::vector<double> bias;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

/// Glorot-uniform init: weights in +-sqrt(6 / (fan_in + fan_out)), zero bias.
DenseLayer glorot_dense(std::size_t out_dim, std::size_t in_dim, SeededRng& rng);

/// W x + b.
std::vector<double> dense_forward(const DenseLayer& layer,
                                  const std::vector<double>& input);

struct ClassWeights {
    std::vector<double> w;  // one positive weight per class

    static ClassWeights uniform(std::size_t n_classes);
    /// n_samples / (C * n_c), the usual inverse-frequency weighting.
    static ClassWeights inverse_frequency(const std::vector<std::size_t>& labels,
                                          std::size_t n_classes);
};

/// Max-subtracted softmax; strictly positive components summing to 1.
std::vector<double> softmax(const std::vector<double>& logits);

struct NllResult {
    double loss = 0.0;
    std::vector<double> grad_logits;
    std::vector<double> probs;
};

/// Class-weighted negative log-likelihood of a softmax prediction:
/// loss = -w_t * log softmax(logits)_t, grad = w_t * (softmax - onehot(t)).
NllResult softmax_nll(const std::vector<double>& logits, std::size_t target,
                      const ClassWeights& weights);

struct DropoutResult {
    std::vector<double> output;
    /// Per-entry multiplier, 0 when dropped, 1/(1-p) when kept; the backward
    /// pass applies the same mask.
    std::vector<double> mask;
};

/// Inverted dropout; identity in eval mode. Requires 0 <= rate < 1.
DropoutResult dropout(const std::vector<double>& input, double rate,
                      SeededRng& rng, bool training);

/// AdamW state over one flat parameter vector. Weight decay is decoupled:
/// param -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * param).
struct OptimizerState {
    std::size_t t = 0;
    std::vector<double> m;
    std::vector<double> v;
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;

    static OptimizerState adamw(std::size_t n_params, double lr,
                                double weight_decay = 1e-4);
};

void adamw_step(OptimizerState& state, std::vector<double>& params,
                const std::vector<double>& grads);

enum class SchedulerKind { StepLr, CosineAnnealing };

struct SchedulerConfig {
    SchedulerKind kind = SchedulerKind::StepLr;
    std::size_t step_size = 10;  // StepLR period, epochs
    double gamma = 0.5;          // StepLR decay factor, 0 < gamma <= 1
    std::size_t t_max = 50;      // cosine annealing period, epochs
    double eta_min = 0.0;        // cosine annealing floor
};

/// StepLR: base * gamma^floor(epoch / step_size).
/// Cosine: eta_min + (base - eta_min) * (1 + cos(pi * epoch / t_max)) / 2.
double scheduler_lr(const SchedulerConfig& config, double base_lr,
                    std::size_t epoch);

/// Small sequential net: per layer an optional ReLU and an optional inverted
/// dropout after the affine map. Covers both the pre-net and the post-net of
/// the hybrid model.
struct Mlp {
    std::vector<DenseLayer> layers;
    std::vector<char> relu_after;       // one flag per layer
    std::vector<double> dropout_after;  // one rate per layer, 0 disables

    std::size_t in_dim() const { return layers.front().in_dim(); }
    std::size_t out_dim() const { return layers.back().out_dim(); }
};

struct MlpCache {
    std::vector<double> input;
    std::vector<std::vector<double>> pre_activations;  // W x + b per layer
    std::vector<std::vector<double>> outputs;          // after relu/dropout
    std::vector<std::vector<double>> dropout_masks;    // empty when unused
    bool training = false;
};

/// Forward pass; fills `cache` when given (required for mlp_backward). The rng
/// is consumed only by train-mode dropout.
std::vector<double> mlp_forward(const Mlp& mlp, const std::vector<double>& input,
                                bool training, SeededRng* rng, MlpCache* cache);

struct MlpGrads {
    std::vector<Matrix> grad_weights;
    std::vector<std::vector<double>> grad_biases;
    std::vector<double> grad_input;
};

/// Reverse-mode pass through linear/ReLU/dropout. ReLU subgradient at 0 is 0.
/// Throws std::runtime_error if the cache does not match the network.
MlpGrads mlp_backward(const Mlp& mlp, const MlpCache& cache,
                      const std::vector<double>& upstream);

}  // namespace iqnncs
