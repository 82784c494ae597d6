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
#include <cmath>

#include <doctest.h>

#include "iqnncs/classical_nn.hpp"
#include "test_oracles.hpp"

using namespace iqnncs;

namespace {

Mlp two_layer_net(std::size_t in, std::size_t hidden, std::size_t out,
                  SeededRng& rng, double dropout_rate = 0.0) {
    Mlp mlp;
    mlp.layers.push_back(glorot_dense(hidden, in, rng));
    mlp.layers.push_back(glorot_dense(out, hidden, rng));
    mlp.relu_after = {1, 0};
    mlp.dropout_after = {dropout_rate, 0.0};
    return mlp;
}

}  // namespace

TEST_SUITE("classical_nn") {

TEST_CASE("dense_forward") {
    SUBCASE("identity weights pass the input through") {
        DenseLayer layer{Matrix::identity(3), {0, 0, 0}};
        const std::vector<double> x{1.5, -2.0, 0.25};
        CHECK(dense_forward(layer, x) == x);
    }
    SUBCASE("zero weights return the bias") {
        DenseLayer layer{Matrix(2, 3), {0.5, -1.5}};
        CHECK(dense_forward(layer, {1, 2, 3}) == std::vector<double>{0.5, -1.5});
    }
    SUBCASE("random layer matches a hand-rolled product") {
        SeededRng rng(1);
        const DenseLayer layer = glorot_dense(4, 3, rng);
        std::vector<double> x{0.3, -0.7, 1.9};
        const auto y = dense_forward(layer, x);
        for (std::size_t r = 0; r < 4; ++r) {
            double acc = layer.bias[r];
            for (std::size_t c = 0; c < 3; ++c) acc += layer.weights(r, c) * x[c];
            CHECK(y[r] == doctest::Approx(acc).epsilon(1e-15));
        }
    }
    SUBCASE("shape mismatch is rejected") {
        DenseLayer layer{Matrix(2, 3), {0, 0}};
        CHECK_THROWS_AS(dense_forward(layer, {1.0}), std::invalid_argument);
    }
}

TEST_CASE("softmax_nll") {
    const ClassWeights unit = ClassWeights::uniform(3);
    SUBCASE("uniform logits cost ln 3") {
        const NllResult r = softmax_nll({0.7, 0.7, 0.7}, 1, unit);
        CHECK(r.loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    }
    SUBCASE("saturated correct prediction costs ~0") {
        const NllResult r = softmax_nll({1000.0, 0.0, 0.0}, 0, unit);
        CHECK(r.loss == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::isfinite(r.loss));
    }
    SUBCASE("softmax sums to one and stays positive") {
        SeededRng rng(2);
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> logits(4);
            for (auto& l : logits) l = rng.gaussian(0.0, 20.0);
            const auto p = softmax(logits);
            double sum = 0.0;
            for (double v : p) {
                CHECK(v > 0.0);
                sum += v;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("gradient matches finite differences on random configurations") {
        SeededRng rng(3);
        for (int rep = 0; rep < 50; ++rep) {
            const std::size_t n_classes = 2 + rng.uniform_below(5);
            std::vector<double> logits(n_classes);
            for (auto& l : logits) l = rng.gaussian();
            ClassWeights w;
            for (std::size_t c = 0; c < n_classes; ++c)
                w.w.push_back(0.25 + rng.uniform() * 2.0);
            const std::size_t target = rng.uniform_below(n_classes);
            const NllResult r = softmax_nll(logits, target, w);
            for (std::size_t k = 0; k < n_classes; ++k) {
                const double fd = oracle::central_diff(
                    [&](double v) {
                        auto l = logits;
                        l[k] = v;
                        return softmax_nll(l, target, w).loss;
                    },
                    logits[k], 1e-6);
                CHECK(r.grad_logits[k] == doctest::Approx(fd).epsilon(1e-7));
            }
        }
    }
    SUBCASE("bad targets and sizes are rejected") {
        CHECK_THROWS_AS(softmax_nll({1.0, 2.0}, 2, ClassWeights::uniform(2)),
                        std::out_of_range);
        CHECK_THROWS_AS(softmax_nll({1.0}, 0, ClassWeights::uniform(1)),
                        std::invalid_argument);
    }
}

TEST_CASE("class weights") {
    const ClassWeights w = ClassWeights::inverse_frequency({0, 0, 0, 1, 1, 2}, 3);
    CHECK(w.w[0] == doctest::Approx(6.0 / (3.0 * 3.0)));
    CHECK(w.w[1] == doctest::Approx(6.0 / (3.0 * 2.0)));
    CHECK(w.w[2] == doctest::Approx(6.0 / (3.0 * 1.0)));
}

TEST_CASE("dropout") {
    SeededRng rng(4);
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    SUBCASE("rate zero is the identity in both modes") {
        CHECK(dropout(x, 0.0, rng, true).output == x);
        CHECK(dropout(x, 0.0, rng, false).output == x);
    }
    SUBCASE("eval mode is the identity for any rate") {
        CHECK(dropout(x, 0.7, rng, false).output == x);
    }
    SUBCASE("keep fraction and scaling at p=0.5 over 10^4 entries") {
        std::vector<double> big(10000, 1.0);
        const DropoutResult r = dropout(big, 0.5, rng, true);
        std::size_t kept = 0;
        double sum = 0.0;
        for (std::size_t i = 0; i < big.size(); ++i) {
            if (r.mask[i] != 0.0) {
                ++kept;
                CHECK(r.output[i] == doctest::Approx(2.0));
            } else {
                CHECK(r.output[i] == 0.0);
            }
            sum += r.output[i];
        }
        const double kept_fraction = static_cast<double>(kept) / 10000.0;
        CHECK(std::abs(kept_fraction - 0.5) < 0.05);
        CHECK(std::abs(sum / 10000.0 - 1.0) < 0.05);  // E[output] = input
    }
    SUBCASE("rate 1 is rejected") {
        CHECK_THROWS_AS(dropout(x, 1.0, rng, true), std::invalid_argument);
    }
}

TEST_CASE("adamw") {
    SUBCASE("zero gradient with no decay leaves parameters alone") {
        OptimizerState opt = OptimizerState::adamw(3, 0.05, 0.0);
        std::vector<double> params{1.0, -2.0, 0.5};
        const auto before = params;
        adamw_step(opt, params, {0, 0, 0});
        CHECK(params == before);
    }
    SUBCASE("pure decay shrinks by (1 - lr*wd) per step") {
        OptimizerState opt = OptimizerState::adamw(1, 0.1, 0.01);
        std::vector<double> params{4.0};
        adamw_step(opt, params, {0.0});
        CHECK(params[0] == doctest::Approx(4.0 * (1.0 - 0.1 * 0.01)).epsilon(1e-15));
        adamw_step(opt, params, {0.0});
        CHECK(params[0] ==
              doctest::Approx(4.0 * std::pow(1.0 - 0.1 * 0.01, 2)).epsilon(1e-12));
    }
    SUBCASE("converges on f(x) = x^2 from x = 1") {
        OptimizerState opt = OptimizerState::adamw(1, 0.05, 0.0);
        std::vector<double> params{1.0};
        for (int step = 0; step < 200; ++step)
            adamw_step(opt, params, {2.0 * params[0]});
        CHECK(std::abs(params[0]) < 0.05);
    }
    SUBCASE("lambda = 0 equals a textbook Adam bitwise") {
        SeededRng rng(6);
        OptimizerState opt = OptimizerState::adamw(4, 0.01, 0.0);
        std::vector<double> params{0.3, -0.9, 1.7, 0.01};
        std::vector<double> ref = params;
        const double b1 = 0.9, b2 = 0.999;
        double m[4] = {0, 0, 0, 0}, v[4] = {0, 0, 0, 0};
        for (int step = 1; step <= 25; ++step) {
            std::vector<double> g(4);
            for (auto& gi : g) gi = rng.gaussian();
            adamw_step(opt, params, g);
            for (int i = 0; i < 4; ++i) {
                m[i] = b1 * m[i] + (1.0 - b1) * g[i];
                v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
                const double mh = m[i] / (1.0 - std::pow(b1, step));
                const double vh = v[i] / (1.0 - std::pow(b2, step));
                ref[i] -= 0.01 * (mh / (std::sqrt(vh) + 1e-8));
            }
            for (int i = 0; i < 4; ++i) CHECK(params[i] == ref[i]);
        }
    }
    SUBCASE("shape mismatch is rejected") {
        OptimizerState opt = OptimizerState::adamw(2, 0.01);
        std::vector<double> params{1.0, 2.0};
        CHECK_THROWS_AS(adamw_step(opt, params, {1.0}), std::invalid_argument);
    }
}

TEST_CASE("schedulers") {
    SchedulerConfig step;
    step.kind = SchedulerKind::StepLr;
    step.step_size = 10;
    step.gamma = 0.5;
    SchedulerConfig cosine;
    cosine.kind = SchedulerKind::CosineAnnealing;
    cosine.t_max = 50;
    cosine.eta_min = 0.001;

    CHECK(scheduler_lr(step, 0.01, 0) == doctest::Approx(0.01));
    CHECK(scheduler_lr(cosine, 0.01, 0) == doctest::Approx(0.01));
    CHECK(scheduler_lr(step, 0.01, 25) == doctest::Approx(0.01 / 4.0));
    CHECK(scheduler_lr(cosine, 0.01, 50) == doctest::Approx(0.001));
    CHECK(scheduler_lr(cosine, 0.01, 25) ==
          doctest::Approx(0.001 + (0.01 - 0.001) * 0.5));

    SchedulerConfig degenerate = step;
    degenerate.step_size = 0;
    CHECK_THROWS_AS(scheduler_lr(degenerate, 0.01, 1), std::invalid_argument);
}

TEST_CASE("mlp backprop") {
    SUBCASE("single linear layer gives the outer-product weight gradient") {
        Mlp mlp;
        SeededRng rng(7);
        mlp.layers.push_back(glorot_dense(2, 3, rng));
        mlp.relu_after = {0};
        mlp.dropout_after = {0.0};
        const std::vector<double> x{0.5, -1.0, 2.0};
        MlpCache cache;
        mlp_forward(mlp, x, false, nullptr, &cache);
        const std::vector<double> upstream{1.5, -0.25};
        const MlpGrads g = mlp_backward(mlp, cache, upstream);
        for (std::size_t r = 0; r < 2; ++r) {
            CHECK(g.grad_biases[0][r] == upstream[r]);
            for (std::size_t c = 0; c < 3; ++c)
                CHECK(g.grad_weights[0](r, c) == doctest::Approx(upstream[r] * x[c]));
        }
    }
    SUBCASE("all-negative pre-activations kill the input gradient") {
        Mlp mlp;
        mlp.layers.push_back(DenseLayer{Matrix::identity(2), {-10.0, -10.0}});
        mlp.relu_after = {1};
        mlp.dropout_after = {0.0};
        MlpCache cache;
        mlp_forward(mlp, {1.0, 2.0}, false, nullptr, &cache);
        const MlpGrads g = mlp_backward(mlp, cache, {1.0, 1.0});
        CHECK(g.grad_input == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("two-layer net matches finite differences") {
        SeededRng rng(8);
        Mlp mlp = two_layer_net(3, 5, 2, rng);
        const std::vector<double> x{0.4, -0.6, 1.1};
        const std::vector<double> upstream{0.8, -1.2};

        const auto scalar = [&](const Mlp& net) {
            const auto y = mlp_forward(net, x, false, nullptr, nullptr);
            return upstream[0] * y[0] + upstream[1] * y[1];
        };

        MlpCache cache;
        mlp_forward(mlp, x, false, nullptr, &cache);
        const MlpGrads g = mlp_backward(mlp, cache, upstream);

        for (std::size_t li = 0; li < mlp.layers.size(); ++li) {
            for (std::size_t i = 0; i < mlp.layers[li].weights.data.size(); ++i) {
                const double fd = oracle::central_diff(
                    [&](double v) {
                        Mlp net = mlp;
                        net.layers[li].weights.data[i] = v;
                        return scalar(net);
                    },
                    mlp.layers[li].weights.data[i], 1e-6);
                CHECK(std::abs(g.grad_weights[li].data[i] - fd) < 1e-6);
            }
            for (std::size_t i = 0; i < mlp.layers[li].bias.size(); ++i) {
                const double fd = oracle::central_diff(
                    [&](double v) {
                        Mlp net = mlp;
                        net.layers[li].bias[i] = v;
                        return scalar(net);
                    },
                    mlp.layers[li].bias[i], 1e-6);
                CHECK(std::abs(g.grad_biases[li][i] - fd) < 1e-6);
            }
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double fd = oracle::central_diff(
                [&](double v) {
                    Mlp net = mlp;
                    auto xx = x;
                    xx[j] = v;
                    const auto y = mlp_forward(net, xx, false, nullptr, nullptr);
                    return upstream[0] * y[0] + upstream[1] * y[1];
                },
                x[j], 1e-6);
            CHECK(std::abs(g.grad_input[j] - fd) < 1e-6);
        }
    }
    SUBCASE("dropout mask is replayed in the backward pass") {
        SeededRng rng(9);
        Mlp mlp = two_layer_net(3, 8, 2, rng, 0.5);
        MlpCache cache;
        SeededRng drop_rng(10);
        mlp_forward(mlp, {1.0, -0.5, 0.75}, true, &drop_rng, &cache);
        const MlpGrads g = mlp_backward(mlp, cache, {1.0, 0.0});
        // Units dropped in the forward pass contribute no weight gradient in
        // the second layer.
        for (std::size_t h = 0; h < 8; ++h) {
            if (cache.dropout_masks[0][h] == 0.0)
                CHECK(g.grad_weights[1](0, h) == 0.0);
        }
    }
    SUBCASE("a stale cache is rejected") {
        SeededRng rng(11);
        Mlp mlp = two_layer_net(3, 4, 2, rng);
        MlpCache cache;
        mlp_forward(mlp, {1, 2, 3}, false, nullptr, &cache);
        cache.pre_activations.pop_back();
        CHECK_THROWS_AS(mlp_backward(mlp, cache, {1.0, 0.0}), std::runtime_error);
    }
    SUBCASE("dropout eval output equals the train-mode expectation") {
        SeededRng rng(12);
        Mlp mlp = two_layer_net(4, 6, 2, rng, 0.3);
        const std::vector<double> x{0.2, 0.4, -0.8, 1.0};
        const auto eval_out = mlp_forward(mlp, x, false, nullptr, nullptr);
        std::vector<double> mean(2, 0.0);
        SeededRng drop_rng(13);
        const int n = 20000;
        for (int rep = 0; rep < n; ++rep) {
            const auto y = mlp_forward(mlp, x, true, &drop_rng, nullptr);
            mean[0] += y[0];
            mean[1] += y[1];
        }
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(mean[k] / n - eval_out[k]) < 0.03);
    }
}

}  // TEST_SUITE
