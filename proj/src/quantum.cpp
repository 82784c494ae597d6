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
#include "iqnncs/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iqnncs {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

using Complex = std::complex<double>;

// In-place 2x2 unitary on `qubit`; the pair stride follows the MSB-first
// qubit-to-bit mapping documented on StateVector.
void apply_single_qubit(StateVector& state, std::size_t qubit, Complex m00,
                        Complex m01, Complex m10, Complex m11) {
    const std::size_t n = state.n_qubits;
    const std::size_t dim = state.dim();
    const std::size_t step = std::size_t{1} << (n - 1 - qubit);
    for (std::size_t block = 0; block < dim; block += 2 * step) {
        for (std::size_t i = block; i < block + step; ++i) {
            const Complex a0 = state.amplitudes[i];
            const Complex a1 = state.amplitudes[i + step];
            state.amplitudes[i] = m00 * a0 + m01 * a1;
            state.amplitudes[i + step] = m10 * a0 + m11 * a1;
        }
    }
}

void rotate_in_place(StateVector& state, std::size_t qubit, PauliAxis axis,
                     double angle) {
    if (qubit >= state.n_qubits)
        throw std::out_of_range("apply_rotation: qubit index out of range");
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
        case PauliAxis::X:
            apply_single_qubit(state, qubit, Complex(c, 0), Complex(0, -s),
                               Complex(0, -s), Complex(c, 0));
            break;
        case PauliAxis::Y:
            apply_single_qubit(state, qubit, Complex(c, 0), Complex(-s, 0),
                               Complex(s, 0), Complex(c, 0));
            break;
        case PauliAxis::Z: {
            // Diagonal, so skip the generic pair loop.
            const Complex e0(c, -s);
            const Complex e1(c, s);
            const std::size_t n = state.n_qubits;
            const std::size_t bit = n - 1 - qubit;
            for (std::size_t i = 0; i < state.dim(); ++i)
                state.amplitudes[i] *= ((i >> bit) & 1) ? e1 : e0;
            break;
        }
    }
}

void cnot_in_place(StateVector& state, std::size_t control, std::size_t target) {
    if (control == target)
        throw std::invalid_argument("apply_cnot: control equals target");
    if (control >= state.n_qubits || target >= state.n_qubits)
        throw std::out_of_range("apply_cnot: qubit index out of range");
    const std::size_t n = state.n_qubits;
    const std::size_t cbit = std::size_t{1} << (n - 1 - control);
    const std::size_t tbit = std::size_t{1} << (n - 1 - target);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if ((i & cbit) && !(i & tbit))
            std::swap(state.amplitudes[i], state.amplitudes[i | tbit]);
    }
}

void entangle_in_place(StateVector& state, const QuantumParams& params) {
    const std::size_t n = state.n_qubits;
    for (std::size_t layer = 0; layer < params.n_layers; ++layer) {
        for (std::size_t q = 0; q < n; ++q) {
            // Rot(a,b,c) = RZ(a) RY(b) RZ(c): rightmost factor acts first.
            rotate_in_place(state, q, PauliAxis::Z, params.at(layer, q, 2));
            rotate_in_place(state, q, PauliAxis::Y, params.at(layer, q, 1));
            rotate_in_place(state, q, PauliAxis::Z, params.at(layer, q, 0));
        }
        if (n > 1) {
            const std::size_t range = (layer % (n - 1)) + 1;
            for (std::size_t q = 0; q < n; ++q)
                cnot_in_place(state, q, (q + range) % n);
        }
    }
}

}  // namespace

PauliAxis pauli_axis_from_string(const std::string& s) {
    if (s == "X" || s == "x") return PauliAxis::X;
    if (s == "Y" || s == "y") return PauliAxis::Y;
    if (s == "Z" || s == "z") return PauliAxis::Z;
    throw std::invalid_argument("unknown Pauli axis: " + s);
}

std::string to_string(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::X: return "X";
        case PauliAxis::Y: return "Y";
        default: return "Z";
    }
}

StateVector StateVector::zero_state(std::size_t n_qubits) {
    if (n_qubits == 0)
        throw std::invalid_argument("StateVector: need at least one qubit");
    StateVector s;
    s.n_qubits = n_qubits;
    s.amplitudes.assign(std::size_t{1} << n_qubits, Complex(0, 0));
    s.amplitudes[0] = Complex(1, 0);
    return s;
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return acc;
}

QuantumParams QuantumParams::zeros(const CircuitConfig& config) {
    QuantumParams p;
    p.n_layers = config.n_layers;
    p.n_qubits = config.n_qubits;
    p.theta.assign(config.n_layers * config.n_qubits * 3, 0.0);
    return p;
}

QuantumParams QuantumParams::random(const CircuitConfig& config, SeededRng& rng) {
    QuantumParams p = zeros(config);
    for (auto& t : p.theta) t = rng.uniform() * 2.0 * kPi;
    return p;
}

StateVector apply_rotation(const StateVector& state, std::size_t qubit,
                           PauliAxis axis, double angle) {
    StateVector out = state;
    rotate_in_place(out, qubit, axis, angle);
    return out;
}

StateVector apply_cnot(const StateVector& state, std::size_t control,
                       std::size_t target) {
    StateVector out = state;
    cnot_in_place(out, control, target);
    return out;
}

StateVector angle_embed(const CircuitConfig& config,
                        const std::vector<double>& features) {
    if (features.size() != config.n_qubits)
        throw std::invalid_argument("angle_embed: feature count must equal n_qubits");
    StateVector state = StateVector::zero_state(config.n_qubits);
    for (std::size_t q = 0; q < config.n_qubits; ++q)
        rotate_in_place(state, q, config.embedding_axis, features[q]);
    return state;
}

StateVector strongly_entangling(const StateVector& state,
                                const QuantumParams& params) {
    if (params.n_qubits != state.n_qubits)
        throw std::invalid_argument("strongly_entangling: qubit count mismatch");
    if (params.theta.size() != params.n_layers * params.n_qubits * 3)
        throw std::invalid_argument("strongly_entangling: theta shape mismatch");
    StateVector out = state;
    entangle_in_place(out, params);
    return out;
}

QuantumOutput measure_z(const StateVector& state) {
    const std::size_t n = state.n_qubits;
    QuantumOutput out;
    out.expectations.assign(n, 0.0);
    for (std::size_t b = 0; b < state.dim(); ++b) {
        const double p = std::norm(state.amplitudes[b]);
        if (p == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k)
            out.expectations[k] += ((b >> (n - 1 - k)) & 1) ? -p : p;
    }
    for (auto& e : out.expectations) e = std::clamp(e, -1.0, 1.0);
    return out;
}

QuantumOutput qnn_forward(const CircuitConfig& config, const QuantumParams& params,
                          const std::vector<double>& features) {
    if (params.n_layers != config.n_layers || params.n_qubits != config.n_qubits)
        throw std::invalid_argument("qnn_forward: params do not match config");
    StateVector state = angle_embed(config, features);
    entangle_in_place(state, params);
    return measure_z(state);
}

QnnGradients param_shift_grad(const CircuitConfig& config,
                              const QuantumParams& params,
                              const std::vector<double>& features,
                              const std::vector<double>& upstream) {
    if (params.n_layers != config.n_layers || params.n_qubits != config.n_qubits)
        throw std::invalid_argument("param_shift_grad: params do not match config");
    if (features.size() != config.n_qubits)
        throw std::invalid_argument("param_shift_grad: feature length mismatch");
    if (upstream.size() != config.n_qubits)
        throw std::invalid_argument("param_shift_grad: upstream length mismatch");

    QnnGradients grads;
    grads.grad_theta = QuantumParams::zeros(config);
    grads.grad_features.assign(config.n_qubits, 0.0);

    const auto contract = [&upstream](const QuantumOutput& plus,
                                      const QuantumOutput& minus) {
        double acc = 0.0;
        for (std::size_t k = 0; k < upstream.size(); ++k)
            acc += upstream[k] * 0.5 * (plus.expectations[k] - minus.expectations[k]);
        return acc;
    };

    QuantumParams shifted = params;
    for (std::size_t i = 0; i < shifted.theta.size(); ++i) {
        const double original = shifted.theta[i];
        shifted.theta[i] = original + kHalfPi;
        const QuantumOutput plus = qnn_forward(config, shifted, features);
        shifted.theta[i] = original - kHalfPi;
        const QuantumOutput minus = qnn_forward(config, shifted, features);
        shifted.theta[i] = original;
        grads.grad_theta.theta[i] = contract(plus, minus);
    }

    std::vector<double> shifted_features = features;
    for (std::size_t j = 0; j < features.size(); ++j) {
        const double original = shifted_features[j];
        shifted_features[j] = original + kHalfPi;
        const QuantumOutput plus = qnn_forward(config, params, shifted_features);
        shifted_features[j] = original - kHalfPi;
        const QuantumOutput minus = qnn_forward(config, params, shifted_features);
        shifted_features[j] = original;
        grads.grad_features[j] = contract(plus, minus);
    }
    return grads;
}

}  // namespace iqnncs
