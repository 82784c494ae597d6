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
#include "iqnncs/metrics.hpp"

#include <iostream>
#include <stdexcept>

namespace iqnncs {

double f1_score(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

EvaluationReport compute_metrics(const std::vector<std::size_t>& truth,
                                 const std::vector<std::size_t>& predicted,
                                 std::size_t n_classes) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("compute_metrics: label list length mismatch");
    if (truth.empty())
        throw std::invalid_argument("compute_metrics: empty label lists");
    if (n_classes < 2)
        throw std::invalid_argument("compute_metrics: need at least two classes");

    EvaluationReport r;
    r.n_test = truth.size();
    r.confusion = Matrix(n_classes, n_classes, 0.0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= n_classes || predicted[i] >= n_classes)
            throw std::out_of_range("compute_metrics: label out of range");
        r.confusion(truth[i], predicted[i]) += 1.0;
    }

    double correct = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) correct += r.confusion(c, c);
    r.accuracy = correct / static_cast<double>(r.n_test);

    r.precision.resize(n_classes);
    r.recall.resize(n_classes);
    r.f1.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
        double predicted_c = 0.0, true_c = 0.0;
        for (std::size_t k = 0; k < n_classes; ++k) {
            predicted_c += r.confusion(k, c);
            true_c += r.confusion(c, k);
        }
        const double tp = r.confusion(c, c);
        if (predicted_c == 0.0) {
            std::cerr << "warning: class " << c
                      << " never predicted; precision defined as 0\n";
            r.precision[c] = 0.0;
        } else {
            r.precision[c] = tp / predicted_c;
        }
        if (true_c == 0.0) {
            std::cerr << "warning: class " << c
                      << " absent from truth; recall defined as 0\n";
            r.recall[c] = 0.0;
        } else {
            r.recall[c] = tp / true_c;
        }
        r.f1[c] = f1_score(r.precision[c], r.recall[c]);
        r.macro_f1 += r.f1[c];
    }
    r.macro_f1 /= static_cast<double>(n_classes);
    return r;
}

}  // namespace iqnncs
