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
#include <string>
#include <vector>

#include "iqnncs/classical_nn.hpp"
#include "iqnncs/data.hpp"
#include "iqnncs/quantum.hpp"

namespace iqnncs {

/// Classical pre-net -> quantum layer -> classical post-net. The pre-net maps
/// the PCA input to one embedding angle per qubit; the post-net maps the
/// Pauli-Z expectation vector to class logits.
struct HybridModel {
    Mlp pre;   // Linear(d_input -> n_qubits) + ReLU
    CircuitConfig circuit;
    QuantumParams qparams;
    Mlp post;  // Linear(n_qubits -> hidden) + ReLU + Dropout, Linear(hidden -> C)
    double dropout_rate = 0.2;

    std::size_t input_dim() const { return pre.in_dim(); }
    std::size_t n_classes() const { return post.out_dim(); }
    std::size_t post_hidden() const { return post.layers.front().out_dim(); }
};

/// Seeded construction: Glorot-uniform classical layers, variational angles
/// uniform in [0, 2*pi).
HybridModel make_model(std::size_t d_input, const CircuitConfig& circuit,
                       std::size_t post_hidden, std::size_t n_classes,
                       double dropout_rate, SeededRng& rng);

struct ForwardCache {
    MlpCache pre_cache;
    std::vector<double> embedding_angles;  // pre-net output fed to the circuit
    QuantumOutput qout;
    MlpCache post_cache;
};

/// Logits for one input; fills `cache` for model_backward when given. The rng
/// is consumed only by train-mode dropout.
std::vector<double> model_forward(const HybridModel& model,
                                  const std::vector<double>& input, bool training,
                                  SeededRng* rng, ForwardCache* cache);

struct ModelGrads {
    MlpGrads pre;
    QuantumParams grad_theta;
    MlpGrads post;
    std::vector<double> grad_input;
};

/// Hybrid reverse pass: classical chain rule through the post-net, quantum
/// parameter-shift for theta and the embedding angles, then the pre-net.
ModelGrads model_backward(const HybridModel& model, const ForwardCache& cache,
                          const std::vector<double>& grad_logits);

/// Flat parameter vector in a fixed order (pre, theta, post); set_params is
/// the exact inverse.
std::vector<double> flatten_params(const HybridModel& model);
void set_params(HybridModel& model, const std::vector<double>& flat);
std::vector<double> flatten_grads(const HybridModel& model, const ModelGrads& grads);

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 16;
    double lr = 0.01;
    double weight_decay = 1e-4;
    SchedulerConfig scheduler;
    std::size_t patience = 10;
    double min_improvement = 1e-4;
    std::uint64_t seed = 42;
    /// Empty -> inverse class frequency computed from the training split.
    ClassWeights class_weights;
};

struct TrainingHistory {
    std::vector<double> train_loss, train_acc;
    std::vector<double> val_loss, val_acc;
    std::vector<double> test_loss, test_acc;
    std::vector<double> lr;
    std::size_t best_epoch = 0;
    bool stopped_early = false;

    std::size_t epochs_run() const { return train_loss.size(); }
};

/// Stop once validation loss has failed to improve by more than
/// min_improvement for `patience` consecutive epochs. patience must be >= 1.
class EarlyStopping {
  public:
    EarlyStopping(std::size_t patience, double min_improvement = 1e-4);
    /// Feed one epoch's validation loss; true means stop now.
    bool observe(double val_loss);
    double best_loss() const { return best_; }
    std::size_t best_epoch() const { return best_epoch_; }

  private:
    std::size_t patience_;
    double min_improvement_;
    double best_;
    std::size_t best_epoch_ = 0;
    std::size_t epoch_ = 0;
    std::size_t stale_ = 0;
};

struct TrainResult {
    HybridModel model;  // parameters of the best validation-loss epoch
    TrainingHistory history;
};

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<std::size_t> predictions;
};

/// Mean class-weighted NLL and accuracy of `model` on `data`, eval mode.
EvalResult evaluate_model(const HybridModel& model, const Dataset& data,
                          const ClassWeights& weights);

/// Mini-batch AdamW training with per-epoch LR scheduling and early stopping.
/// Per-sample gradients within a batch are averaged before the step. Throws
/// std::runtime_error with a diagnostic if the loss turns non-finite.
TrainResult train(const HybridModel& init, const Dataset& train_data,
                  const Dataset& val_data, const Dataset& test_data,
                  const TrainConfig& config);

struct CheckpointData {
    HybridModel model;
    std::string preprocessor_hash;  // empty when none recorded
};

/// Versioned JSON checkpoint; loading validates format, version and shape
/// consistency and never yields a partially filled model.
void save_checkpoint(const HybridModel& model, const std::string& path,
                     const std::string& preprocessor_hash = "");
CheckpointData load_checkpoint(const std::string& path);
/// As above but additionally requires matching dimensions; a class-count or
/// input-width mismatch is reported as an incompatibility error.
CheckpointData load_checkpoint(const std::string& path, std::size_t expect_input,
                               std::size_t expect_classes);

}  // namespace iqnncs
