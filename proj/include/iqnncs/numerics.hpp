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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace iqnncs {

/// Dense row-major matrix of doubles. Only the operations the rest of the
/// library needs; this is not a BLAS.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    /// Row r as a contiguous span of `cols` doubles.
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
/// Cosine similarity u.v / (|u||v|); returns 0 if either vector has zero norm.
double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v);

/// Complex amplitudes stored contiguously; std::complex<double> guarantees the
/// interleaved (re, im) layout the statevector kernels rely on.
using ComplexVector = std::vector<std::complex<double>>;

struct EigenResult {
    std::vector<double> eigenvalues;  // sorted descending
    Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Throws std::invalid_argument if m is not square or not symmetric to 1e-10.
/// Postconditions: m v_i = lambda_i v_i and V^T V = I, both to 1e-8 or better.
EigenResult sym_eigen(const Matrix& m);

/// Deterministic, platform-independent PRNG: xoshiro256++ seeded through
/// splitmix64. A fixed seed yields a bit-identical stream everywhere, which is
/// what every seeded component of the pipeline builds on.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53 bits of the top of next_u64().
    double uniform();
    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_open();
    /// Uniform integer in [0, bound) via Lemire's multiply-shift rejection.
    std::uint64_t uniform_below(std::uint64_t bound);
    /// One N(mean, stddev^2) draw via Box-Muller (cosine branch, two uniforms
    /// consumed per call). Throws std::invalid_argument if stddev < 0.
    double gaussian(double mean = 0.0, double stddev = 1.0);

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

/// n gaussian draws; stddev = 0 degenerates to all-mean exactly.
std::vector<double> gaussian_sample(SeededRng& rng, double mean, double stddev,
                                    std::size_t n);

/// Fisher-Yates using rng.uniform_below; deterministic for a fixed seed.
template <typename T>
void shuffle(std::vector<T>& values, SeededRng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace iqnncs
