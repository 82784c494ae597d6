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
#include "iqnncs/run_config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace iqnncs {

using nlohmann::json;

namespace {

SchedulerKind scheduler_kind_from_string(const std::string& s) {
    if (s == "step" || s == "steplr") return SchedulerKind::StepLr;
    if (s == "cosine" || s == "cosine_annealing") return SchedulerKind::CosineAnnealing;
    throw std::invalid_argument("unknown scheduler kind: " + s);
}

}  // namespace

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }

    if (j.contains("data")) {
        const auto& d = j["data"];
        data_csv = d.value("csv", data_csv);
        schema_path = d.value("schema", schema_path);
    }
    if (j.contains("preprocessing")) {
        const auto& p = j["preprocessing"];
        pca_components = p.value("pca_components", pca_components);
        if (p.contains("balancing"))
            balancing = balancing_from_string(p["balancing"].get<std::string>());
        smote_k = p.value("smote_k", smote_k);
    }
    if (j.contains("split")) {
        const auto& s = j["split"];
        f_train = s.value("train", f_train);
        f_val = s.value("val", f_val);
        f_test = s.value("test", f_test);
    }
    if (j.contains("circuit")) {
        const auto& c = j["circuit"];
        circuit.n_qubits = c.value("n_qubits", circuit.n_qubits);
        circuit.n_layers = c.value("n_layers", circuit.n_layers);
        if (c.contains("embedding_axis"))
            circuit.embedding_axis =
                pauli_axis_from_string(c["embedding_axis"].get<std::string>());
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        post_hidden = m.value("post_hidden", post_hidden);
        dropout = m.value("dropout", dropout);
    }
    if (j.contains("training")) {
        const auto& t = j["training"];
        training.epochs = t.value("epochs", training.epochs);
        training.batch_size = t.value("batch_size", training.batch_size);
        training.lr = t.value("learning_rate", training.lr);
        training.weight_decay = t.value("weight_decay", training.weight_decay);
        training.patience = t.value("patience", training.patience);
        training.min_improvement =
            t.value("min_improvement", training.min_improvement);
        if (t.contains("scheduler")) {
            const auto& s = t["scheduler"];
            if (s.contains("kind"))
                training.scheduler.kind =
                    scheduler_kind_from_string(s["kind"].get<std::string>());
            training.scheduler.step_size =
                s.value("step_size", training.scheduler.step_size);
            training.scheduler.gamma = s.value("gamma", training.scheduler.gamma);
            training.scheduler.t_max = s.value("t_max", training.scheduler.t_max);
            training.scheduler.eta_min =
                s.value("eta_min", training.scheduler.eta_min);
        }
    }
    if (j.contains("interpret")) {
        const auto& i = j["interpret"];
        ig_steps = i.value("ig_steps", ig_steps);
        smoothgrad_samples = i.value("smoothgrad_samples", smoothgrad_samples);
        smoothgrad_sigma = i.value("smoothgrad_sigma", smoothgrad_sigma);
        indecision_perturbations =
            i.value("indecision_perturbations", indecision_perturbations);
        indecision_sigma = i.value("indecision_sigma", indecision_sigma);
        indecision_threshold = i.value("indecision_threshold", indecision_threshold);
        occlusion_baseline = i.value("occlusion_baseline", occlusion_baseline);
        prototype_top_k = i.value("prototype_top_k", prototype_top_k);
        tsne_perplexity = i.value("tsne_perplexity", tsne_perplexity);
        tsne_iterations = i.value("tsne_iterations", tsne_iterations);
    }
    seed = j.value("seed", seed);
    out = j.value("out", out);
}

void RunConfig::sync_seed() { training.seed = seed; }

}  // namespace iqnncs
