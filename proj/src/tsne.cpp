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
#include "iqnncs/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace iqnncs {

namespace {

constexpr double kTiny = 1e-12;

Matrix squared_distances(const Matrix& x) {
    const std::size_t n = x.rows;
    Matrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k) {
                const double diff = x(i, k) - x(j, k);
                acc += diff * diff;
            }
            d(i, j) = acc;
            d(j, i) = acc;
        }
    }
    return d;
}

// Row i of P given precision beta: p_j ~ exp(-beta d_ij), p_i = 0.
// Returns the Shannon entropy (nats) of the row.
double fill_conditional_row(const Matrix& d2, std::size_t i, double beta,
                            std::vector<double>& row) {
    const std::size_t n = d2.rows;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        row[j] = (j == i) ? 0.0 : std::exp(-beta * d2(i, j));
        sum += row[j];
    }
    if (sum <= 0.0) sum = kTiny;
    double entropy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        row[j] /= sum;
        if (row[j] > 0.0) entropy -= row[j] * std::log(row[j]);
    }
    return entropy;
}

Matrix perplexity_calibrated_p(const Matrix& d2, double perplexity) {
    const std::size_t n = d2.rows;
    const double target_entropy = std::log(perplexity);
    Matrix p(n, n, 0.0);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = fill_conditional_row(d2, i, beta, row);
        for (int iter = 0; iter < 64 && std::abs(entropy - target_entropy) > 1e-7;
             ++iter) {
            if (entropy > target_entropy) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
            entropy = fill_conditional_row(d2, i, beta, row);
        }
        for (std::size_t j = 0; j < n; ++j) p(i, j) = row[j];
    }

    // Symmetrize and normalize to a joint distribution.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = (p(i, j) + p(j, i)) / (2.0 * static_cast<double>(n));
            p(i, j) = std::max(v, kTiny);
            p(j, i) = p(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) p(i, i) = 0.0;
    return p;
}

}  // namespace

Embedding2D tsne_embed(const Matrix& activations,
                       const std::vector<std::size_t>& labels,
                       const TsneConfig& config) {
    const std::size_t n = activations.rows;
    if (n < 4) throw std::invalid_argument("tsne_embed: need at least 4 samples");
    if (!labels.empty() && labels.size() != n)
        throw std::invalid_argument("tsne_embed: label count mismatch");

    const Matrix d2 = squared_distances(activations);
    double max_d2 = 0.0;
    for (double v : d2.data) max_d2 = std::max(max_d2, v);
    if (max_d2 <= 0.0)
        throw std::invalid_argument("tsne_embed: all inputs are identical");

    double perplexity = config.perplexity;
    if (static_cast<double>(n) < 3.0 * perplexity + 1.0) {
        perplexity = (static_cast<double>(n) - 1.0) / 3.0;
        std::cerr << "warning: perplexity reduced to " << perplexity
                  << " for " << n << " samples\n";
    }
    if (perplexity < 1.0) perplexity = 1.0;

    const Matrix p = perplexity_calibrated_p(d2, perplexity);

    SeededRng rng(config.seed);
    Matrix y(n, 2);
    for (auto& v : y.data) v = rng.gaussian(0.0, 1e-2);

    Matrix velocity(n, 2, 0.0);
    Matrix gains(n, 2, 1.0);
    Matrix q(n, n, 0.0);
    Matrix grad(n, 2, 0.0);

    Embedding2D out;
    out.labels = labels;
    out.kl_history.reserve(config.iterations);

    const std::size_t switch_iter =
        std::min(config.exaggeration_iters, config.iterations);
    const double eta =
        config.learning_rate > 0.0
            ? config.learning_rate
            : std::max(50.0, static_cast<double>(n) / config.early_exaggeration);

    for (std::size_t iter = 0; iter < config.iterations; ++iter) {
        const bool lying = iter < switch_iter;
        const double exaggeration = lying ? config.early_exaggeration : 1.0;
        const double momentum =
            lying ? config.momentum_start : config.momentum_final;

        // Student-t affinities in the embedding.
        double sum_q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dy0 = y(i, 0) - y(j, 0);
                const double dy1 = y(i, 1) - y(j, 1);
                const double w = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
                q(i, j) = w;
                q(j, i) = w;
                sum_q += 2.0 * w;
            }
        }
        sum_q = std::max(sum_q, kTiny);

        std::fill(grad.data.begin(), grad.data.end(), 0.0);
        double kl = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double qij = std::max(q(i, j) / sum_q, kTiny);
                const double mult = (exaggeration * p(i, j) - qij) * q(i, j);
                grad(i, 0) += 4.0 * mult * (y(i, 0) - y(j, 0));
                grad(i, 1) += 4.0 * mult * (y(i, 1) - y(j, 1));
                if (j > i) kl += 2.0 * p(i, j) * std::log(p(i, j) / qij);
            }
        }
        out.kl_history.push_back(kl);

        // Delta-bar-delta gains plus momentum, the standard update schedule.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < 2; ++k) {
                const bool same_sign =
                    (grad(i, k) > 0.0) == (velocity(i, k) > 0.0);
                gains(i, k) = same_sign ? std::max(gains(i, k) * 0.8, 0.01)
                                        : gains(i, k) + 0.2;
                velocity(i, k) = momentum * velocity(i, k) -
                                 eta * gains(i, k) * grad(i, k);
                y(i, k) += velocity(i, k);
            }
        }

        // Keep the embedding centered.
        double mean0 = 0.0, mean1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean0 += y(i, 0);
            mean1 += y(i, 1);
        }
        mean0 /= static_cast<double>(n);
        mean1 /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            y(i, 0) -= mean0;
            y(i, 1) -= mean1;
        }
    }

    out.coords = std::move(y);
    return out;
}

}  // namespace iqnncs
