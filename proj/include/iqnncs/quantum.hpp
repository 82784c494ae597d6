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

#include "iqnncs/numerics.hpp"

namespace iqnncs {

enum class PauliAxis { X, Y, Z };

PauliAxis pauli_axis_from_string(const std::string& s);
std::string to_string(PauliAxis axis);

/// Circuit hyperparameters of the quantum layer: register width, number of
/// entangling layers and the encoding rotation axis.
struct CircuitConfig {
    std::size_t n_qubits = 6;
    std::size_t n_layers = 4;
    PauliAxis embedding_axis = PauliAxis::Y;
};

/// Pure n-qubit state as 2^n complex amplitudes. Qubit k maps to bit
/// (index >> (n_qubits - 1 - k)) & 1, so amplitude order matches the usual
/// ket-string reading |q0 q1 ... q{n-1}>.
struct StateVector {
    std::size_t n_qubits = 0;
    ComplexVector amplitudes;

    static StateVector zero_state(std::size_t n_qubits);

    std::size_t dim() const { return amplitudes.size(); }
    double norm_sq() const;
};

/// Trainable rotation angles, shape (n_layers, n_qubits, 3), radians.
struct QuantumParams {
    std::size_t n_layers = 0;
    std::size_t n_qubits = 0;
    std::vector<double> theta;  // [layer][qubit][component], row-major

    static QuantumParams zeros(const CircuitConfig& config);
    /// Uniform angles in [0, 2*pi).
    static QuantumParams random(const CircuitConfig& config, SeededRng& rng);

    double& at(std::size_t layer, std::size_t qubit, std::size_t component) {
        return theta[(layer * n_qubits + qubit) * 3 + component];
    }
    double at(std::size_t layer, std::size_t qubit, std::size_t component) const {
        return theta[(layer * n_qubits + qubit) * 3 + component];
    }
    std::size_t size() const { return theta.size(); }
};

/// Per-qubit Pauli-Z expectation values, each in [-1, 1].
struct QuantumOutput {
    std::vector<double> expectations;
};

/// Single-qubit rotation R_P(angle) = exp(-i * angle * P / 2) on `qubit`.
StateVector apply_rotation(const StateVector& state, std::size_t qubit,
                           PauliAxis axis, double angle);

StateVector apply_cnot(const StateVector& state, std::size_t control,
                       std::size_t target);

/// Angle encoding: feature j becomes the rotation angle of qubit j applied to
/// |0...0>, producing the product state (x) R_P(f_j)|0>.
StateVector angle_embed(const CircuitConfig& config,
                        const std::vector<double>& features);

/// Entangling ansatz. Layer l applies a general rotation
/// Rot(a,b,c) = RZ(a) RY(b) RZ(c) with (a,b,c) = theta[l][q] to every qubit,
/// then a CNOT ring CNOT(q, (q + r) mod n) with range r = (l mod (n-1)) + 1.
/// A single-qubit register gets rotations only.
StateVector strongly_entangling(const StateVector& state,
                                const QuantumParams& params);

QuantumOutput measure_z(const StateVector& state);

/// angle_embed -> strongly_entangling -> measure_z.
QuantumOutput qnn_forward(const CircuitConfig& config, const QuantumParams& params,
                          const std::vector<double>& features);

struct QnnGradients {
    QuantumParams grad_theta;           // same shape as the variational angles
    std::vector<double> grad_features;  // d<loss>/d(embedding angle), length n_qubits
};

/// Parameter-shift gradients for every scalar angle, variational and
/// embedding alike: d<Z_k>/da = (1/2)(<Z_k>(a + pi/2) - <Z_k>(a - pi/2)).
/// `upstream` carries dLoss/d<Z_k>; the returned values are the contracted
/// sums over k, accumulated in fixed qubit order.
QnnGradients param_shift_grad(const CircuitConfig& config,
                              const QuantumParams& params,
                              const std::vector<double>& features,
                              const std::vector<double>& upstream);

}  // namespace iqnncs
