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
#include "iqnncs/classical_nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqnncs {

DenseLayer glorot_dense(std::size_t out_dim, std::size_t in_dim, SeededRng& rng) {
    DenseLayer layer;
    layer.weights = Matrix(out_dim, in_dim);
    layer.bias.assign(out_dim, 0.0);
    const double bound = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (auto& w : layer.weights.data) w = (2.0 * rng.uniform() - 1.0) * bound;
    return layer;
}

std::vector<double> dense_forward(const DenseLayer& layer,
                                  const std::vector<double>& input) {
    if (input.size() != layer.in_dim())
        throw std::invalid_argument("dense_forward: input length mismatch");
    std::vector<double> out = matvec(layer.weights, input);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += layer.bias[i];
    return out;
}

ClassWeights ClassWeights::uniform(std::size_t n_classes) {
    return ClassWeights{std::vector<double>(n_classes, 1.0)};
}

ClassWeights ClassWeights::inverse_frequency(const std::vector<std::size_t>& labels,
                                             std::size_t n_classes) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t y : labels) {
        if (y >= n_classes)
            throw std::out_of_range("inverse_frequency: label out of range");
        ++counts[y];
    }
    ClassWeights cw;
    cw.w.resize(n_classes);
    const double n = static_cast<double>(labels.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (counts[c] == 0)
            throw std::invalid_argument("inverse_frequency: class absent from labels");
        cw.w[c] = n / (static_cast<double>(n_classes) * static_cast<double>(counts[c]));
    }
    return cw;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (auto& p : out) p /= sum;
    return out;
}

NllResult softmax_nll(const std::vector<double>& logits, std::size_t target,
                      const ClassWeights& weights) {
    const std::size_t n_classes = logits.size();
    if (n_classes < 2)
        throw std::invalid_argument("softmax_nll: need at least two classes");
    if (target >= n_classes)
        throw std::out_of_range("softmax_nll: target class out of range");
    if (weights.w.size() != n_classes)
        throw std::invalid_argument("softmax_nll: class weight length mismatch");

    NllResult r;
    r.probs = softmax(logits);
    const double wt = weights.w[target];
    // log(softmax_t) recomputed from shifted logits, not from the normalized
    // probability, so a saturated prediction cannot round to log(0).
    const double m = *std::max_element(logits.begin(), logits.end());
    double lse = 0.0;
    for (double l : logits) lse += std::exp(l - m);
    r.loss = -wt * ((logits[target] - m) - std::log(lse));
    r.grad_logits = r.probs;
    for (auto& g : r.grad_logits) g *= wt;
    r.grad_logits[target] -= wt;
    return r;
}

DropoutResult dropout(const std::vector<double>& input, double rate,
                      SeededRng& rng, bool training) {
    if (rate < 0.0 || rate >= 1.0)
        throw std::invalid_argument("dropout: rate must be in [0, 1)");
    DropoutResult r;
    r.output = input;
    r.mask.assign(input.size(), 1.0);
    if (!training || rate == 0.0) return r;
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (rng.uniform() < rate) {
            r.mask[i] = 0.0;
            r.output[i] = 0.0;
        } else {
            r.mask[i] = keep_scale;
            r.output[i] *= keep_scale;
        }
    }
    return r;
}

OptimizerState OptimizerState::adamw(std::size_t n_params, double lr,
                                     double weight_decay) {
    OptimizerState s;
    s.m.assign(n_params, 0.0);
    s.v.assign(n_params, 0.0);
    s.lr = lr;
    s.weight_decay = weight_decay;
    return s;
}

void adamw_step(OptimizerState& state, std::vector<double>& params,
                const std::vector<double>& grads) {
    if (params.size() != state.m.size() || grads.size() != state.m.size())
        throw std::invalid_argument("adamw_step: parameter/gradient shape mismatch");
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= state.lr * (m_hat / (std::sqrt(v_hat) + state.eps) +
                                 state.weight_decay * params[i]);
    }
}

double scheduler_lr(const SchedulerConfig& config, double base_lr,
                    std::size_t epoch) {
    switch (config.kind) {
        case SchedulerKind::StepLr: {
            if (config.step_size == 0)
                throw std::invalid_argument("scheduler_lr: step_size must be positive");
            const auto k = static_cast<double>(epoch / config.step_size);
            return base_lr * std::pow(config.gamma, k);
        }
        case SchedulerKind::CosineAnnealing: {
            if (config.t_max == 0)
                throw std::invalid_argument("scheduler_lr: t_max must be positive");
            const double phase = 3.14159265358979323846 *
                                 static_cast<double>(epoch) /
                                 static_cast<double>(config.t_max);
            return config.eta_min +
                   (base_lr - config.eta_min) * (1.0 + std::cos(phase)) / 2.0;
        }
    }
    throw std::invalid_argument("scheduler_lr: unknown scheduler kind");
}

std::vector<double> mlp_forward(const Mlp& mlp, const std::vector<double>& input,
                                bool training, SeededRng* rng, MlpCache* cache) {
    if (mlp.layers.empty()) throw std::invalid_argument("mlp_forward: empty network");
    if (mlp.relu_after.size() != mlp.layers.size() ||
        mlp.dropout_after.size() != mlp.layers.size())
        throw std::invalid_argument("mlp_forward: per-layer flag lengths mismatch");

    if (cache) {
        *cache = MlpCache{};
        cache->input = input;
        cache->training = training;
    }
    std::vector<double> x = input;
    for (std::size_t li = 0; li < mlp.layers.size(); ++li) {
        std::vector<double> pre = dense_forward(mlp.layers[li], x);
        if (cache) cache->pre_activations.push_back(pre);
        if (mlp.relu_after[li])
            for (auto& v : pre) v = std::max(v, 0.0);
        std::vector<double> mask;
        if (mlp.dropout_after[li] > 0.0) {
            if (training && !rng)
                throw std::invalid_argument("mlp_forward: dropout needs an rng in training mode");
            SeededRng dummy(0);
            DropoutResult d = dropout(pre, mlp.dropout_after[li],
                                      rng ? *rng : dummy, training);
            pre = std::move(d.output);
            mask = std::move(d.mask);
        }
        if (cache) {
            cache->outputs.push_back(pre);
            cache->dropout_masks.push_back(std::move(mask));
        }
        x = std::move(pre);
    }
    return x;
}

MlpGrads mlp_backward(const Mlp& mlp, const MlpCache& cache,
                      const std::vector<double>& upstream) {
    const std::size_t n_layers = mlp.layers.size();
    if (cache.pre_activations.size() != n_layers ||
        cache.outputs.size() != n_layers ||
        cache.input.size() != mlp.in_dim())
        throw std::runtime_error("mlp_backward: cache does not match network");
    if (upstream.size() != mlp.out_dim())
        throw std::invalid_argument("mlp_backward: upstream length mismatch");

    MlpGrads grads;
    grads.grad_weights.resize(n_layers);
    grads.grad_biases.resize(n_layers);

    std::vector<double> delta = upstream;
    for (std::size_t li = n_layers; li-- > 0;) {
        const DenseLayer& layer = mlp.layers[li];
        if (!cache.dropout_masks[li].empty()) {
            for (std::size_t i = 0; i < delta.size(); ++i)
                delta[i] *= cache.dropout_masks[li][i];
        }
        if (mlp.relu_after[li]) {
            const auto& pre = cache.pre_activations[li];
            for (std::size_t i = 0; i < delta.size(); ++i)
                if (pre[i] <= 0.0) delta[i] = 0.0;
        }
        const std::vector<double>& in =
            (li == 0) ? cache.input : cache.outputs[li - 1];
        Matrix gw(layer.out_dim(), layer.in_dim());
        for (std::size_t r = 0; r < layer.out_dim(); ++r)
            for (std::size_t c = 0; c < layer.in_dim(); ++c)
                gw(r, c) = delta[r] * in[c];
        grads.grad_weights[li] = std::move(gw);
        grads.grad_biases[li] = delta;

        std::vector<double> next(layer.in_dim(), 0.0);
        for (std::size_t r = 0; r < layer.out_dim(); ++r) {
            const double d = delta[r];
            if (d == 0.0) continue;
            const double* wrow = layer.weights.row(r);
            for (std::size_t c = 0; c < layer.in_dim(); ++c) next[c] += d * wrow[c];
        }
        delta = std::move(next);
    }
    grads.grad_input = std::move(delta);
    return grads;
}

}  // namespace iqnncs
