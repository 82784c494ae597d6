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
#include "iqnncs/hybrid_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace iqnncs {

using nlohmann::json;

HybridModel make_model(std::size_t d_input, const CircuitConfig& circuit,
                       std::size_t post_hidden, std::size_t n_classes,
                       double dropout_rate, SeededRng& rng) {
    if (d_input == 0 || post_hidden == 0 || n_classes < 2)
        throw std::invalid_argument("make_model: bad dimensions");
    HybridModel m;
    m.circuit = circuit;
    m.pre.layers.push_back(glorot_dense(circuit.n_qubits, d_input, rng));
    m.pre.relu_after = {1};
    m.pre.dropout_after = {0.0};
    m.qparams = QuantumParams::random(circuit, rng);
    m.post.layers.push_back(glorot_dense(post_hidden, circuit.n_qubits, rng));
    m.post.layers.push_back(glorot_dense(n_classes, post_hidden, rng));
    m.post.relu_after = {1, 0};
    m.post.dropout_after = {dropout_rate, 0.0};
    m.dropout_rate = dropout_rate;
    return m;
}

std::vector<double> model_forward(const HybridModel& model,
                                  const std::vector<double>& input, bool training,
                                  SeededRng* rng, ForwardCache* cache) {
    if (input.size() != model.input_dim())
        throw std::invalid_argument("model_forward: input length mismatch");
    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;
    const std::vector<double> angles =
        mlp_forward(model.pre, input, training, rng, &c.pre_cache);
    c.embedding_angles = angles;
    c.qout = qnn_forward(model.circuit, model.qparams, angles);
    return mlp_forward(model.post, c.qout.expectations, training, rng,
                       &c.post_cache);
}

ModelGrads model_backward(const HybridModel& model, const ForwardCache& cache,
                          const std::vector<double>& grad_logits) {
    if (cache.embedding_angles.size() != model.circuit.n_qubits ||
        cache.qout.expectations.size() != model.circuit.n_qubits)
        throw std::runtime_error("model_backward: cache does not match model");
    ModelGrads g;
    g.post = mlp_backward(model.post, cache.post_cache, grad_logits);
    const QnnGradients qg = param_shift_grad(model.circuit, model.qparams,
                                             cache.embedding_angles,
                                             g.post.grad_input);
    g.grad_theta = qg.grad_theta;
    g.pre = mlp_backward(model.pre, cache.pre_cache, qg.grad_features);
    g.grad_input = g.pre.grad_input;
    return g;
}

namespace {

void append_mlp(const Mlp& mlp, std::vector<double>& flat) {
    for (const auto& layer : mlp.layers) {
        flat.insert(flat.end(), layer.weights.data.begin(), layer.weights.data.end());
        flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
    }
}

std::size_t read_mlp(Mlp& mlp, const std::vector<double>& flat, std::size_t pos) {
    for (auto& layer : mlp.layers) {
        for (auto& w : layer.weights.data) w = flat.at(pos++);
        for (auto& b : layer.bias) b = flat.at(pos++);
    }
    return pos;
}

void append_mlp_grads(const MlpGrads& grads, std::vector<double>& flat) {
    for (std::size_t li = 0; li < grads.grad_weights.size(); ++li) {
        flat.insert(flat.end(), grads.grad_weights[li].data.begin(),
                    grads.grad_weights[li].data.end());
        flat.insert(flat.end(), grads.grad_biases[li].begin(),
                    grads.grad_biases[li].end());
    }
}

}  // namespace

std::vector<double> flatten_params(const HybridModel& model) {
    std::vector<double> flat;
    append_mlp(model.pre, flat);
    flat.insert(flat.end(), model.qparams.theta.begin(), model.qparams.theta.end());
    append_mlp(model.post, flat);
    return flat;
}

void set_params(HybridModel& model, const std::vector<double>& flat) {
    std::size_t pos = read_mlp(model.pre, flat, 0);
    for (auto& t : model.qparams.theta) t = flat.at(pos++);
    pos = read_mlp(model.post, flat, pos);
    if (pos != flat.size())
        throw std::invalid_argument("set_params: flat vector length mismatch");
}

std::vector<double> flatten_grads(const HybridModel& model, const ModelGrads& grads) {
    (void)model;
    std::vector<double> flat;
    append_mlp_grads(grads.pre, flat);
    flat.insert(flat.end(), grads.grad_theta.theta.begin(),
                grads.grad_theta.theta.end());
    append_mlp_grads(grads.post, flat);
    return flat;
}

EarlyStopping::EarlyStopping(std::size_t patience, double min_improvement)
    : patience_(patience),
      min_improvement_(min_improvement),
      best_(std::numeric_limits<double>::infinity()) {
    if (patience == 0)
        throw std::invalid_argument("EarlyStopping: patience must be >= 1");
}

bool EarlyStopping::observe(double val_loss) {
    if (val_loss < best_ - min_improvement_) {
        best_ = val_loss;
        best_epoch_ = epoch_;
        stale_ = 0;
    } else {
        ++stale_;
    }
    ++epoch_;
    return stale_ >= patience_;
}

EvalResult evaluate_model(const HybridModel& model, const Dataset& data,
                          const ClassWeights& weights) {
    EvalResult r;
    r.predictions.reserve(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto logits = model_forward(model, data.sample(i), false, nullptr,
                                          nullptr);
        const NllResult nll = softmax_nll(logits, data.labels[i], weights);
        r.loss += nll.loss;
        const std::size_t pred = static_cast<std::size_t>(
            std::max_element(logits.begin(), logits.end()) - logits.begin());
        r.predictions.push_back(pred);
        if (pred == data.labels[i]) r.accuracy += 1.0;
    }
    if (data.n() > 0) {
        r.loss /= static_cast<double>(data.n());
        r.accuracy /= static_cast<double>(data.n());
    }
    return r;
}

TrainResult train(const HybridModel& init, const Dataset& train_data,
                  const Dataset& val_data, const Dataset& test_data,
                  const TrainConfig& config) {
    if (train_data.n() == 0 || val_data.n() == 0 || test_data.n() == 0)
        throw std::invalid_argument("train: every split must be nonempty");
    if (config.batch_size == 0 || config.epochs == 0)
        throw std::invalid_argument("train: epochs and batch_size must be positive");
    if (config.patience > config.epochs)
        throw std::invalid_argument("train: patience cannot exceed epochs");
    const std::size_t n_classes = init.n_classes();
    {
        std::vector<char> present(n_classes, 0);
        for (std::size_t y : train_data.labels) {
            if (y >= n_classes)
                throw std::invalid_argument("train: label out of model range");
            present[y] = 1;
        }
        if (std::find(present.begin(), present.end(), 0) != present.end())
            throw std::invalid_argument("train: a class is absent from the train split");
    }

    const ClassWeights weights =
        config.class_weights.w.empty()
            ? ClassWeights::inverse_frequency(train_data.labels, n_classes)
            : config.class_weights;

    SeededRng rng(config.seed);
    HybridModel model = init;
    std::vector<double> params = flatten_params(model);
    OptimizerState opt =
        OptimizerState::adamw(params.size(), config.lr, config.weight_decay);

    TrainResult result;
    result.history = TrainingHistory{};
    EarlyStopping stopper(config.patience, config.min_improvement);
    std::vector<double> best_params = params;

    std::vector<std::size_t> order(train_data.n());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = scheduler_lr(config.scheduler, config.lr, epoch);
        opt.lr = lr;
        shuffle(order, rng);

        for (std::size_t start = 0; start < order.size();
             start += config.batch_size) {
            const std::size_t stop =
                std::min(order.size(), start + config.batch_size);
            std::vector<double> batch_grad(params.size(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t bi = start; bi < stop; ++bi) {
                const std::size_t i = order[bi];
                ForwardCache cache;
                const auto logits =
                    model_forward(model, train_data.sample(i), true, &rng, &cache);
                const NllResult nll =
                    softmax_nll(logits, train_data.labels[i], weights);
                batch_loss += nll.loss;
                const ModelGrads grads =
                    model_backward(model, cache, nll.grad_logits);
                const auto flat = flatten_grads(model, grads);
                for (std::size_t p = 0; p < batch_grad.size(); ++p)
                    batch_grad[p] += flat[p];
            }
            const double scale = 1.0 / static_cast<double>(stop - start);
            batch_loss *= scale;
            if (!std::isfinite(batch_loss))
                throw std::runtime_error(
                    "train: non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch starting at sample " + std::to_string(start));
            for (auto& g : batch_grad) g *= scale;
            adamw_step(opt, params, batch_grad);
            set_params(model, params);
        }

        const EvalResult tr = evaluate_model(model, train_data, weights);
        const EvalResult va = evaluate_model(model, val_data, weights);
        const EvalResult te = evaluate_model(model, test_data, weights);
        result.history.train_loss.push_back(tr.loss);
        result.history.train_acc.push_back(tr.accuracy);
        result.history.val_loss.push_back(va.loss);
        result.history.val_acc.push_back(va.accuracy);
        result.history.test_loss.push_back(te.loss);
        result.history.test_acc.push_back(te.accuracy);
        result.history.lr.push_back(lr);

        const bool stop = stopper.observe(va.loss);
        if (stopper.best_epoch() == epoch) best_params = params;
        if (stop) {
            result.history.stopped_early = true;
            break;
        }
    }

    result.history.best_epoch = stopper.best_epoch();
    set_params(model, best_params);
    result.model = std::move(model);
    return result;
}

namespace {

json mlp_to_json(const Mlp& mlp) {
    json layers = json::array();
    for (const auto& layer : mlp.layers) {
        json rows = json::array();
        for (std::size_t r = 0; r < layer.weights.rows; ++r)
            rows.push_back(std::vector<double>(layer.weights.row(r),
                                               layer.weights.row(r) +
                                                   layer.weights.cols));
        layers.push_back({{"weights", rows}, {"bias", layer.bias}});
    }
    return layers;
}

void mlp_from_json(Mlp& mlp, const json& j) {
    if (j.size() != mlp.layers.size())
        throw std::runtime_error("checkpoint: layer count mismatch");
    for (std::size_t li = 0; li < mlp.layers.size(); ++li) {
        DenseLayer& layer = mlp.layers[li];
        const json& rows = j.at(li).at("weights");
        if (rows.size() != layer.weights.rows)
            throw std::runtime_error("checkpoint: weight shape mismatch");
        for (std::size_t r = 0; r < layer.weights.rows; ++r) {
            const auto row = rows.at(r).get<std::vector<double>>();
            if (row.size() != layer.weights.cols)
                throw std::runtime_error("checkpoint: weight shape mismatch");
            std::copy(row.begin(), row.end(), layer.weights.row(r));
        }
        const auto bias = j.at(li).at("bias").get<std::vector<double>>();
        if (bias.size() != layer.bias.size())
            throw std::runtime_error("checkpoint: bias shape mismatch");
        layer.bias = bias;
    }
}

}  // namespace

void save_checkpoint(const HybridModel& model, const std::string& path,
                     const std::string& preprocessor_hash) {
    json theta = json::array();
    for (std::size_t l = 0; l < model.qparams.n_layers; ++l) {
        json layer = json::array();
        for (std::size_t q = 0; q < model.qparams.n_qubits; ++q)
            layer.push_back({model.qparams.at(l, q, 0), model.qparams.at(l, q, 1),
                             model.qparams.at(l, q, 2)});
        theta.push_back(layer);
    }
    json j{{"format", "iqnncs_checkpoint"},
           {"version", 1},
           {"circuit",
            {{"n_qubits", model.circuit.n_qubits},
             {"n_layers", model.circuit.n_layers},
             {"embedding_axis", to_string(model.circuit.embedding_axis)}}},
           {"dims",
            {{"input", model.input_dim()},
             {"post_hidden", model.post_hidden()},
             {"classes", model.n_classes()}}},
           {"dropout_rate", model.dropout_rate},
           {"pre", mlp_to_json(model.pre)},
           {"theta", theta},
           {"post", mlp_to_json(model.post)},
           {"preprocessor_hash", preprocessor_hash}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint file: " + path);
    out << j.dump(2) << '\n';
}

CheckpointData load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("checkpoint file " + path +
                                 " is not valid JSON: " + e.what());
    }
    try {
        if (j.value("format", "") != "iqnncs_checkpoint")
            throw std::runtime_error("checkpoint: unrecognized format field");
        if (j.value("version", 0) != 1)
            throw std::runtime_error("checkpoint: unsupported version");
        CircuitConfig circuit;
        circuit.n_qubits = j.at("circuit").at("n_qubits").get<std::size_t>();
        circuit.n_layers = j.at("circuit").at("n_layers").get<std::size_t>();
        circuit.embedding_axis = pauli_axis_from_string(
            j.at("circuit").at("embedding_axis").get<std::string>());
        const std::size_t d_input = j.at("dims").at("input").get<std::size_t>();
        const std::size_t hidden = j.at("dims").at("post_hidden").get<std::size_t>();
        const std::size_t classes = j.at("dims").at("classes").get<std::size_t>();
        const double dropout_rate = j.at("dropout_rate").get<double>();

        SeededRng scratch(0);
        HybridModel model =
            make_model(d_input, circuit, hidden, classes, dropout_rate, scratch);
        mlp_from_json(model.pre, j.at("pre"));
        mlp_from_json(model.post, j.at("post"));
        const json& theta = j.at("theta");
        if (theta.size() != circuit.n_layers)
            throw std::runtime_error("checkpoint: theta layer count mismatch");
        for (std::size_t l = 0; l < circuit.n_layers; ++l) {
            if (theta.at(l).size() != circuit.n_qubits)
                throw std::runtime_error("checkpoint: theta qubit count mismatch");
            for (std::size_t q = 0; q < circuit.n_qubits; ++q) {
                const auto angles = theta.at(l).at(q).get<std::vector<double>>();
                if (angles.size() != 3)
                    throw std::runtime_error("checkpoint: theta component count mismatch");
                for (std::size_t k = 0; k < 3; ++k)
                    model.qparams.at(l, q, k) = angles[k];
            }
        }
        CheckpointData data;
        data.model = std::move(model);
        data.preprocessor_hash = j.value("preprocessor_hash", "");
        return data;
    } catch (const json::exception& e) {
        throw std::runtime_error("checkpoint file " + path +
                                 " has an invalid schema: " + e.what());
    }
}

CheckpointData load_checkpoint(const std::string& path, std::size_t expect_input,
                               std::size_t expect_classes) {
    CheckpointData data = load_checkpoint(path);
    if (data.model.n_classes() != expect_classes)
        throw std::runtime_error(
            "checkpoint file " + path + " is incompatible: trained for " +
            std::to_string(data.model.n_classes()) + " classes, expected " +
            std::to_string(expect_classes));
    if (data.model.input_dim() != expect_input)
        throw std::runtime_error(
            "checkpoint file " + path + " is incompatible: input width " +
            std::to_string(data.model.input_dim()) + ", expected " +
            std::to_string(expect_input));
    return data;
}

}  // namespace iqnncs
