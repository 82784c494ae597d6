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

struct Dataset {
    Matrix features;  // n x d
    std::vector<std::size_t> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;

    std::size_t n() const { return features.rows; }
    std::size_t dim() const { return features.cols; }
    std::size_t n_classes() const { return class_names.size(); }

    std::vector<std::size_t> class_counts() const;
    std::vector<double> sample(std::size_t i) const;
};

/// Column roles for CSV ingestion. `classes` optionally pins the label order;
/// otherwise labels are mapped in sorted order of the values found.
struct ColumnSchema {
    std::vector<std::string> numeric;
    std::vector<std::string> categorical;
    std::string label;
    std::vector<std::string> classes;

    static ColumnSchema load(const std::string& path);
    void save(const std::string& path) const;
};

/// Category levels of one raw column, in the fixed order that defines its
/// indicator columns.
struct OneHotMap {
    std::string column;
    std::vector<std::string> levels;
};

/// Parse an RFC-4180 CSV with a header row. Numeric columns are parsed as
/// doubles, categorical columns one-hot encoded, the label column mapped to
/// class indices. Missing cells and unparseable values fail with the line
/// number; unknown labels or categories are named in the error.
/// When `maps` is null the category levels are fitted from the file (sorted)
/// and returned through `fitted_maps` if given; otherwise `maps` is applied.
Dataset load_csv(const std::string& path, const ColumnSchema& schema,
                 const std::vector<OneHotMap>* maps = nullptr,
                 std::vector<OneHotMap>* fitted_maps = nullptr);

/// Write features plus a final label column (class names). Numeric values are
/// emitted with round-trip precision so read-back is exact.
void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column = "label");

enum class Balancing { None, Undersample, Smote };

Balancing balancing_from_string(const std::string& s);
std::string to_string(Balancing b);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Everything fitted on the training split: standardization statistics,
/// retained columns (constant features are dropped), PCA components and the
/// balancing/split record needed to reproduce a run.
struct FittedPreprocessor {
    std::vector<double> means;
    std::vector<double> stds;                   // population std, > 0
    std::vector<std::size_t> kept_features;     // indices into raw columns
    std::vector<std::string> feature_names;     // retained raw names
    std::vector<std::string> class_names;       // pins the label order at apply time
    std::vector<OneHotMap> onehot_maps;
    Matrix pca_components;                      // d_pca x d, rows orthonormal
    std::vector<double> pca_explained_variance; // descending
    Balancing balancing = Balancing::None;
    std::size_t smote_k = 5;
    SplitIndices split;
    std::uint64_t seed = 42;

    bool has_pca() const { return pca_components.rows > 0; }

    void save(const std::string& path) const;
    static FittedPreprocessor load(const std::string& path);
    /// FNV-1a of the serialized form; checkpoints embed it so a model cannot
    /// silently run against a different preprocessing.
    std::string content_hash() const;
};

/// Fit means and population stds on the training data; constant columns are
/// dropped with a warning, an all-constant feature set is an error.
FittedPreprocessor fit_standardize(const Dataset& train);
Dataset apply_standardize(const FittedPreprocessor& prep, const Dataset& data);

/// Top-d_pca eigenvectors of the population covariance of (standardized)
/// train data via sym_eigen. Component signs are fixed by making each row's
/// largest-magnitude entry positive.
void fit_pca(FittedPreprocessor& prep, const Dataset& standardized_train,
             std::size_t d_pca);
Dataset apply_pca(const FittedPreprocessor& prep, const Dataset& standardized);

/// Reduce every class to the minority count by seeded sampling without
/// replacement; original row order is preserved among survivors.
Dataset undersample(const Dataset& data, SeededRng& rng);

/// SMOTE: upsample each minority class to the majority count with synthetic
/// points x_i + u (x_nn - x_i), u ~ U(0,1), x_nn among the k nearest same-class
/// neighbors. k is capped at class size - 1; singleton classes are an error.
Dataset smote(const Dataset& data, std::size_t k, SeededRng& rng);

/// Seeded stratified split; per-class counts follow the fractions to within
/// one sample (largest-remainder rounding inside each class).
SplitIndices stratified_split(const Dataset& data, double f_train, double f_val,
                              double f_test, SeededRng& rng);

Dataset select_rows(const Dataset& data, const std::vector<std::size_t>& rows);

/// Gaussian blobs: class c is centered at separation * e_{c} (unit-norm random
/// direction once c exceeds the dimension), unit within-class std.
Dataset synth_blobs(std::size_t n_per_class, std::size_t n_classes,
                    std::size_t dim, double separation, SeededRng& rng);

}  // namespace iqnncs
