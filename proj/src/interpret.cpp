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
#include "iqnncs/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace iqnncs {

AttributionMethod attribution_method_from_string(const std::string& s) {
    if (s == "gradient" || s == "signed_gradient") return AttributionMethod::SignedGradient;
    if (s == "saliency") return AttributionMethod::Saliency;
    if (s == "gxi" || s == "grad_times_input") return AttributionMethod::GradTimesInput;
    if (s == "ig" || s == "integrated_gradients") return AttributionMethod::IntegratedGradients;
    if (s == "smoothgrad") return AttributionMethod::SmoothGrad;
    throw std::invalid_argument("unknown attribution method: " + s);
}

std::string to_string(AttributionMethod m) {
    switch (m) {
        case AttributionMethod::SignedGradient: return "gradient";
        case AttributionMethod::Saliency: return "saliency";
        case AttributionMethod::GradTimesInput: return "grad_times_input";
        case AttributionMethod::IntegratedGradients: return "integrated_gradients";
        case AttributionMethod::SmoothGrad: return "smoothgrad";
    }
    return "unknown";
}

std::vector<double> logit_gradient(const HybridModel& model,
                                   const std::vector<double>& x, std::size_t c) {
    if (c >= model.n_classes())
        throw std::out_of_range("logit_gradient: class index out of range");
    ForwardCache cache;
    model_forward(model, x, false, nullptr, &cache);
    std::vector<double> upstream(model.n_classes(), 0.0);
    upstream[c] = 1.0;
    return model_backward(model, cache, upstream).grad_input;
}

AttributionVector saliency(const HybridModel& model, const std::vector<double>& x,
                           std::size_t c, std::size_t instance_id) {
    AttributionVector a;
    a.instance_id = instance_id;
    a.target_class = c;
    a.scores = logit_gradient(model, x, c);
    for (auto& s : a.scores) s = std::abs(s);
    a.method = to_string(AttributionMethod::Saliency);
    return a;
}

AttributionVector grad_times_input(const HybridModel& model,
                                   const std::vector<double>& x, std::size_t c,
                                   std::size_t instance_id) {
    AttributionVector a;
    a.instance_id = instance_id;
    a.target_class = c;
    a.scores = logit_gradient(model, x, c);
    for (std::size_t j = 0; j < x.size(); ++j) a.scores[j] *= x[j];
    a.method = to_string(AttributionMethod::GradTimesInput);
    return a;
}

AttributionVector integrated_gradients(const HybridModel& model,
                                       const std::vector<double>& x, std::size_t c,
                                       const std::vector<double>& baseline,
                                       std::size_t steps,
                                       std::size_t instance_id) {
    if (baseline.size() != x.size())
        throw std::invalid_argument("integrated_gradients: baseline shape mismatch");
    if (steps < 8)
        throw std::invalid_argument("integrated_gradients: need at least 8 steps");
    std::vector<double> acc(x.size(), 0.0);
    std::vector<double> point(x.size());
    for (std::size_t t = 1; t <= steps; ++t) {
        const double alpha = static_cast<double>(t) / static_cast<double>(steps);
        for (std::size_t j = 0; j < x.size(); ++j)
            point[j] = baseline[j] + alpha * (x[j] - baseline[j]);
        const auto grad = logit_gradient(model, point, c);
        for (std::size_t j = 0; j < x.size(); ++j) acc[j] += grad[j];
    }
    AttributionVector a;
    a.instance_id = instance_id;
    a.target_class = c;
    a.scores.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        a.scores[j] = (x[j] - baseline[j]) * acc[j] / static_cast<double>(steps);
    a.method = to_string(AttributionMethod::IntegratedGradients);
    return a;
}

AttributionVector smoothgrad(const HybridModel& model, const std::vector<double>& x,
                             std::size_t c, std::size_t n_samples, double sigma,
                             SeededRng& rng, std::size_t instance_id) {
    if (n_samples == 0)
        throw std::invalid_argument("smoothgrad: need at least one sample");
    std::vector<double> acc(x.size(), 0.0);
    std::vector<double> point(x.size());
    for (std::size_t s = 0; s < n_samples; ++s) {
        for (std::size_t j = 0; j < x.size(); ++j)
            point[j] = x[j] + rng.gaussian(0.0, sigma);
        const AttributionVector sal = saliency(model, point, c);
        for (std::size_t j = 0; j < x.size(); ++j) acc[j] += sal.scores[j];
    }
    AttributionVector a;
    a.instance_id = instance_id;
    a.target_class = c;
    a.scores.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        a.scores[j] = acc[j] / static_cast<double>(n_samples);
    a.method = to_string(AttributionMethod::SmoothGrad);
    return a;
}

std::vector<std::size_t> attribution_ranking(const AttributionVector& attribution) {
    std::vector<std::size_t> order(attribution.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&attribution](std::size_t a, std::size_t b) {
                         return std::abs(attribution.scores[a]) >
                                std::abs(attribution.scores[b]);
                     });
    return order;
}

OcclusionCurve occlusion_curve(const HybridModel& model,
                               const std::vector<double>& x,
                               const std::vector<std::size_t>& ranking,
                               const std::vector<double>& baseline) {
    if (baseline.size() != x.size())
        throw std::invalid_argument("occlusion_curve: baseline shape mismatch");
    {
        std::vector<char> seen(x.size(), 0);
        for (std::size_t j : ranking) {
            if (j >= x.size() || seen[j])
                throw std::invalid_argument(
                    "occlusion_curve: ranking is not a permutation of features");
            seen[j] = 1;
        }
        if (ranking.size() != x.size())
            throw std::invalid_argument(
                "occlusion_curve: ranking is not a permutation of features");
    }

    OcclusionCurve curve;
    curve.ranking = ranking;
    const auto logits = model_forward(model, x, false, nullptr, nullptr);
    const auto probs = softmax(logits);
    curve.predicted_class = static_cast<std::size_t>(
        std::max_element(logits.begin(), logits.end()) - logits.begin());
    curve.probabilities.push_back(probs[curve.predicted_class]);

    std::vector<double> occluded = x;
    for (std::size_t k = 0; k < ranking.size(); ++k) {
        occluded[ranking[k]] = baseline[ranking[k]];
        const auto l = model_forward(model, occluded, false, nullptr, nullptr);
        curve.probabilities.push_back(softmax(l)[curve.predicted_class]);
    }
    return curve;
}

std::vector<double> quantum_activation(const HybridModel& model,
                                       const std::vector<double>& x) {
    ForwardCache cache;
    model_forward(model, x, false, nullptr, &cache);
    return cache.qout.expectations;
}

std::vector<PrototypeMatch> prototype_match(const HybridModel& model,
                                            const std::vector<double>& x,
                                            std::size_t query_label,
                                            const Dataset& train_data,
                                            std::size_t top_k) {
    if (train_data.n() == 0)
        throw std::invalid_argument("prototype_match: empty training set");
    const std::vector<double> query = quantum_activation(model, x);
    if (norm2(query) == 0.0)
        throw std::runtime_error("prototype_match: query activation has zero norm");

    std::vector<PrototypeMatch> matches;
    matches.reserve(train_data.n());
    for (std::size_t i = 0; i < train_data.n(); ++i) {
        const std::vector<double> act =
            quantum_activation(model, train_data.sample(i));
        if (norm2(act) == 0.0) {
            std::cerr << "warning: skipping train instance " << i
                      << " with zero-norm activation\n";
            continue;
        }
        PrototypeMatch m;
        m.train_index = i;
        m.label = train_data.labels[i];
        // Cosine is mathematically within [-1, 1]; clamp roundoff so an exact
        // self-match cannot be outranked by a parallel neighbor.
        m.similarity = std::clamp(cosine_similarity(query, act), -1.0, 1.0);
        m.same_class = (m.label == query_label);
        matches.push_back(m);
    }
    std::stable_sort(matches.begin(), matches.end(),
                     [](const PrototypeMatch& a, const PrototypeMatch& b) {
                         return a.similarity > b.similarity;
                     });
    if (matches.size() > top_k) matches.resize(top_k);
    return matches;
}

namespace {

AttributionVector attribute(const HybridModel& model, const std::vector<double>& x,
                            std::size_t c, const IcaaOptions& opt) {
    switch (opt.method) {
        case AttributionMethod::SignedGradient: {
            AttributionVector a;
            a.target_class = c;
            a.scores = logit_gradient(model, x, c);
            a.method = to_string(AttributionMethod::SignedGradient);
            return a;
        }
        case AttributionMethod::Saliency:
            return saliency(model, x, c);
        case AttributionMethod::GradTimesInput:
            return grad_times_input(model, x, c);
        case AttributionMethod::IntegratedGradients: {
            std::vector<double> baseline = opt.ig_baseline;
            if (baseline.empty()) baseline.assign(x.size(), 0.0);
            return integrated_gradients(model, x, c, baseline, opt.ig_steps);
        }
        case AttributionMethod::SmoothGrad: {
            SeededRng rng(opt.smoothgrad_seed);
            return smoothgrad(model, x, c, opt.smoothgrad_samples,
                              opt.smoothgrad_sigma, rng);
        }
    }
    throw std::invalid_argument("attribute: unknown method");
}

}  // namespace

IcaaMatrix icaa(const HybridModel& model, const std::vector<double>& x,
                const IcaaOptions& options) {
    const std::size_t n_classes = model.n_classes();
    std::vector<std::vector<double>> attributions(n_classes);
    IcaaMatrix m;
    m.values = Matrix(n_classes, n_classes,
                      std::numeric_limits<double>::quiet_NaN());
    m.defined.assign(n_classes, 1);
    for (std::size_t c = 0; c < n_classes; ++c) {
        attributions[c] = attribute(model, x, c, options).scores;
        if (norm2(attributions[c]) == 0.0) {
            m.defined[c] = 0;
            std::cerr << "warning: icaa attribution for class " << c
                      << " is zero; row/column marked undefined\n";
        }
    }
    for (std::size_t i = 0; i < n_classes; ++i) {
        if (!m.defined[i]) continue;
        m.values(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n_classes; ++j) {
            if (!m.defined[j]) continue;
            const double s = cosine_similarity(attributions[i], attributions[j]);
            m.values(i, j) = s;
            m.values(j, i) = s;
        }
    }
    return m;
}

IndecisionReport indecision_scan(const HybridModel& model, const Dataset& samples,
                                 std::size_t n_perturb, double sigma,
                                 double threshold, SeededRng& rng) {
    if (n_perturb < 2)
        throw std::invalid_argument("indecision_scan: need at least two perturbations");
    IndecisionReport report;
    report.threshold = threshold;
    const std::size_t d = samples.dim();
    for (std::size_t i = 0; i < samples.n(); ++i) {
        const std::vector<double> x = samples.sample(i);
        const auto logits = model_forward(model, x, false, nullptr, nullptr);
        const std::size_t pred = static_cast<std::size_t>(
            std::max_element(logits.begin(), logits.end()) - logits.begin());

        Matrix maps(n_perturb, d);
        std::vector<double> point(d);
        for (std::size_t p = 0; p < n_perturb; ++p) {
            for (std::size_t j = 0; j < d; ++j)
                point[j] = x[j] + rng.gaussian(0.0, sigma);
            const AttributionVector sal = saliency(model, point, pred);
            for (std::size_t j = 0; j < d; ++j) maps(p, j) = sal.scores[j];
        }
        // Per-feature std across perturbations, averaged over features. The
        // mean is computed relative to the first map so identical maps come
        // out as exactly zero.
        double mean_std = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double shifted_mu = 0.0;
            for (std::size_t p = 0; p < n_perturb; ++p)
                shifted_mu += maps(p, j) - maps(0, j);
            shifted_mu /= static_cast<double>(n_perturb);
            double var = 0.0;
            for (std::size_t p = 0; p < n_perturb; ++p) {
                const double dv = (maps(p, j) - maps(0, j)) - shifted_mu;
                var += dv * dv;
            }
            mean_std += std::sqrt(var / static_cast<double>(n_perturb));
        }
        mean_std /= static_cast<double>(d);

        report.sample_ids.push_back(i);
        report.saliency_std.push_back(mean_std);
        report.indecisive.push_back(mean_std > threshold ? 1 : 0);
    }
    return report;
}

EntropyStats entropy_stats(const HybridModel& model, const Dataset& samples,
                           std::size_t n_bins) {
    if (n_bins == 0) throw std::invalid_argument("entropy_stats: need bins");
    EntropyStats stats;
    const double h_max = std::log(static_cast<double>(model.n_classes()));
    for (std::size_t i = 0; i < samples.n(); ++i) {
        const auto logits = model_forward(model, samples.sample(i), false,
                                          nullptr, nullptr);
        const auto probs = softmax(logits);
        double h = 0.0;
        for (double p : probs)
            if (p > 0.0) h -= p * std::log(p);
        stats.entropy.push_back(std::clamp(h, 0.0, h_max));
    }
    stats.bin_edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b)
        stats.bin_edges[b] = h_max * static_cast<double>(b) /
                             static_cast<double>(n_bins);
    stats.counts.assign(n_bins, 0);
    for (double h : stats.entropy) {
        std::size_t b = static_cast<std::size_t>(
            std::min(static_cast<double>(n_bins - 1),
                     std::floor(h / h_max * static_cast<double>(n_bins))));
        ++stats.counts[b];
    }
    return stats;
}

Matrix attribution_similarity_matrix(const HybridModel& model,
                                     const Dataset& samples,
                                     AttributionMethod method,
                                     std::optional<std::size_t> fixed_class) {
    const std::size_t n = samples.n();
    std::vector<std::vector<double>> attributions(n);
    IcaaOptions opt;
    opt.method = method;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> x = samples.sample(i);
        std::size_t c;
        if (fixed_class) {
            c = *fixed_class;
        } else {
            const auto logits = model_forward(model, x, false, nullptr, nullptr);
            c = static_cast<std::size_t>(
                std::max_element(logits.begin(), logits.end()) - logits.begin());
        }
        attributions[i] = attribute(model, x, c, opt).scores;
    }
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = cosine_similarity(attributions[i], attributions[j]);
            m(i, j) = s;
            m(j, i) = s;
        }
    }
    return m;
}

}  // namespace iqnncs
