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
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <doctest.h>

#include "iqnncs/data.hpp"
#include "test_oracles.hpp"

using namespace iqnncs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("iqnncs_data_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

/// Leave-one-out 1-NN accuracy, the classifier oracle for synth_blobs.
double one_nn_accuracy(const Dataset& d) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        double best = 1e300;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < d.n(); ++j) {
            if (i == j) continue;
            double d2 = 0.0;
            for (std::size_t k = 0; k < d.dim(); ++k) {
                const double diff = d.features(i, k) - d.features(j, k);
                d2 += diff * diff;
            }
            if (d2 < best) {
                best = d2;
                arg = j;
            }
        }
        if (d.labels[arg] == d.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(d.n());
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("csv ingestion") {
    TempDir dir;
    SUBCASE("one-hot widens a categorical column by its level count") {
        write_file(dir.file("d.csv"),
                   "age,job,risk\n30,clerk,Low\n40,artisan,High\n50,clerk,Low\n");
        ColumnSchema schema;
        schema.numeric = {"age"};
        schema.categorical = {"job"};
        schema.label = "risk";
        const Dataset d = load_csv(dir.file("d.csv"), schema);
        CHECK(d.dim() == 3);  // age + 2 job levels
        CHECK(d.feature_names[1] == "job=artisan");
        CHECK(d.feature_names[2] == "job=clerk");
        CHECK(d.features(0, 2) == 1.0);
        CHECK(d.features(1, 1) == 1.0);
        CHECK(d.n_classes() == 2);
    }
    SUBCASE("unknown label values are named in the error") {
        write_file(dir.file("d.csv"), "x,y\n1,Low\n2,Medium\n");
        ColumnSchema schema;
        schema.numeric = {"x"};
        schema.label = "y";
        schema.classes = {"Low", "High"};
        CHECK_THROWS_WITH_AS(load_csv(dir.file("d.csv"), schema),
                             doctest::Contains("Medium"), std::runtime_error);
    }
    SUBCASE("missing columns and bad cells carry diagnostics") {
        write_file(dir.file("d.csv"), "x,y\n1,Low\n");
        ColumnSchema schema;
        schema.numeric = {"z"};
        schema.label = "y";
        CHECK_THROWS_WITH_AS(load_csv(dir.file("d.csv"), schema),
                             doctest::Contains("z"), std::runtime_error);

        write_file(dir.file("bad.csv"), "x,y\n1,Low\nfoo,High\n");
        ColumnSchema s2;
        s2.numeric = {"x"};
        s2.label = "y";
        CHECK_THROWS_WITH_AS(load_csv(dir.file("bad.csv"), s2),
                             doctest::Contains("line 3"), std::runtime_error);
    }
    SUBCASE("missing cells are rejected with a line number") {
        write_file(dir.file("d.csv"), "x,y\n1,Low\n,High\n");
        ColumnSchema schema;
        schema.numeric = {"x"};
        schema.label = "y";
        CHECK_THROWS_WITH_AS(load_csv(dir.file("d.csv"), schema),
                             doctest::Contains("line 3"), std::runtime_error);
    }
    SUBCASE("quoted fields with commas parse per RFC 4180") {
        write_file(dir.file("d.csv"),
                   "x,\"note, quoted\",y\n1,\"a,b\",Low\n2,\"c\"\"d\",High\n");
        ColumnSchema schema;
        schema.numeric = {"x"};
        schema.categorical = {"note, quoted"};
        schema.label = "y";
        const Dataset d = load_csv(dir.file("d.csv"), schema);
        CHECK(d.n() == 2);
        CHECK(d.feature_names[1] == "note, quoted=a,b");
    }
    SUBCASE("write then read round-trips a generated dataset exactly") {
        SeededRng rng(1);
        const Dataset d = synth_blobs(20, 3, 5, 2.5, rng);
        write_csv(d, dir.file("blob.csv"));
        ColumnSchema schema;
        schema.numeric = d.feature_names;
        schema.label = "label";
        schema.classes = d.class_names;
        const Dataset back = load_csv(dir.file("blob.csv"), schema);
        REQUIRE(back.n() == d.n());
        REQUIRE(back.dim() == d.dim());
        CHECK(back.features.data == d.features.data);
        CHECK(back.labels == d.labels);
    }
}

TEST_CASE("standardization") {
    SUBCASE("column (1,2,3) maps to the closed form with population std") {
        Dataset d;
        d.features = Matrix(3, 1);
        d.features(0, 0) = 1.0;
        d.features(1, 0) = 2.0;
        d.features(2, 0) = 3.0;
        d.labels = {0, 0, 1};
        d.feature_names = {"x"};
        d.class_names = {"a", "b"};
        const FittedPreprocessor prep = fit_standardize(d);
        CHECK(prep.means[0] == doctest::Approx(2.0));
        CHECK(prep.stds[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
        const Dataset out = apply_standardize(prep, d);
        CHECK(out.features(0, 0) == doctest::Approx(-1.2247448713915889).epsilon(1e-10));
        CHECK(out.features(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(out.features(2, 0) == doctest::Approx(1.2247448713915889).epsilon(1e-10));
    }
    SUBCASE("standardized output is a fixed point of refit-and-apply") {
        SeededRng rng(2);
        Dataset d = synth_blobs(30, 2, 4, 1.0, rng);
        const FittedPreprocessor prep = fit_standardize(d);
        const Dataset once = apply_standardize(prep, d);
        const FittedPreprocessor prep2 = fit_standardize(once);
        const Dataset twice = apply_standardize(prep2, once);
        for (std::size_t i = 0; i < once.features.data.size(); ++i)
            CHECK(twice.features.data[i] ==
                  doctest::Approx(once.features.data[i]).epsilon(1e-10));
    }
    SUBCASE("held-out data reuses the training statistics") {
        SeededRng rng(3);
        Dataset train = synth_blobs(25, 2, 3, 1.0, rng);
        Dataset held = synth_blobs(10, 2, 3, 1.0, rng);
        const FittedPreprocessor prep = fit_standardize(train);
        const Dataset out = apply_standardize(prep, held);
        for (std::size_t i = 0; i < held.n(); ++i)
            for (std::size_t j = 0; j < held.dim(); ++j)
                CHECK(out.features(i, j) ==
                      doctest::Approx((held.features(i, j) - prep.means[j]) /
                                      prep.stds[j]));
    }
    SUBCASE("constant features are dropped, all-constant is an error") {
        Dataset d;
        d.features = Matrix(3, 2);
        for (int i = 0; i < 3; ++i) {
            d.features(i, 0) = 7.0;       // constant
            d.features(i, 1) = i * 1.0;   // varying
        }
        d.labels = {0, 1, 0};
        d.feature_names = {"c", "v"};
        d.class_names = {"a", "b"};
        const FittedPreprocessor prep = fit_standardize(d);
        CHECK(prep.kept_features == std::vector<std::size_t>{1});

        Dataset all_const = d;
        for (int i = 0; i < 3; ++i) all_const.features(i, 1) = 4.0;
        CHECK_THROWS_AS(fit_standardize(all_const), std::runtime_error);
    }
}

TEST_CASE("pca") {
    SUBCASE("exact recovery of an axis-aligned 2D subspace") {
        SeededRng rng(4);
        Dataset d;
        d.features = Matrix(40, 4);
        for (std::size_t i = 0; i < 40; ++i) {
            d.features(i, 0) = rng.gaussian(0.0, 3.0);
            d.features(i, 1) = rng.gaussian(0.0, 1.0);
            d.features(i, 2) = 0.0;
            d.features(i, 3) = 0.0;
        }
        // Center exactly so the subspace stays axis-aligned after fit.
        for (std::size_t j = 0; j < 2; ++j) {
            double mu = 0.0;
            for (std::size_t i = 0; i < 40; ++i) mu += d.features(i, j);
            mu /= 40.0;
            for (std::size_t i = 0; i < 40; ++i) d.features(i, j) -= mu;
        }
        d.labels.assign(40, 0);
        d.labels[0] = 1;
        d.feature_names = {"a", "b", "c", "d"};
        d.class_names = {"x", "y"};

        FittedPreprocessor prep;
        prep.kept_features = {0, 1, 2, 3};
        fit_pca(prep, d, 2);
        const Dataset z = apply_pca(prep, d);
        // Reconstruction x_hat = W^T z equals x for points inside the subspace.
        for (std::size_t i = 0; i < 40; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                double xhat = 0.0;
                for (std::size_t k = 0; k < 2; ++k)
                    xhat += prep.pca_components(k, j) * z.features(i, k);
                CHECK(xhat == doctest::Approx(d.features(i, j)).epsilon(1e-8));
            }
        }
    }
    SUBCASE("full-rank projection preserves total variance") {
        SeededRng rng(5);
        Dataset d = synth_blobs(30, 2, 5, 1.5, rng);
        const FittedPreprocessor sprep = fit_standardize(d);
        const Dataset std_d = apply_standardize(sprep, d);
        FittedPreprocessor prep;
        fit_pca(prep, std_d, std_d.dim());
        double total = 0.0;
        for (double v : prep.pca_explained_variance) total += v;
        CHECK(total == doctest::Approx(static_cast<double>(std_d.dim())).epsilon(1e-8));
    }
    SUBCASE("explained variances match the inertia-bisection eigen oracle") {
        SeededRng rng(6);
        Dataset d;
        d.features = Matrix(50, 8);
        for (auto& v : d.features.data) v = rng.gaussian();
        d.labels.assign(50, 0);
        d.labels[1] = 1;
        for (int j = 0; j < 8; ++j) d.feature_names.push_back("f" + std::to_string(j));
        d.class_names = {"a", "b"};
        const FittedPreprocessor sprep = fit_standardize(d);
        const Dataset std_d = apply_standardize(sprep, d);

        FittedPreprocessor prep;
        fit_pca(prep, std_d, 8);

        Matrix cov(8, 8);
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) {
                double acc = 0.0;
                for (std::size_t i = 0; i < 50; ++i)
                    acc += std_d.features(i, a) * std_d.features(i, b);
                cov(a, b) = acc / 50.0;
            }
        const auto expected = oracle::symmetric_eigenvalues(cov);
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(prep.pca_explained_variance[k] ==
                  doctest::Approx(expected[k]).epsilon(1e-8));

        // Rows are orthonormal: W W^T = I.
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) {
                double acc = 0.0;
                for (std::size_t j = 0; j < 8; ++j)
                    acc += prep.pca_components(a, j) * prep.pca_components(b, j);
                CHECK(acc == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-8));
            }
    }
    SUBCASE("component count beyond the width is rejected") {
        SeededRng rng(7);
        Dataset d = synth_blobs(10, 2, 3, 1.0, rng);
        FittedPreprocessor prep;
        CHECK_THROWS_AS(fit_pca(prep, d, 4), std::invalid_argument);
    }
}

TEST_CASE("undersampling") {
    SeededRng rng(8);
    SUBCASE("balanced input keeps its counts") {
        const Dataset d = synth_blobs(15, 3, 2, 1.0, rng);
        const Dataset out = undersample(d, rng);
        CHECK(out.n() == 45);
    }
    SUBCASE("counts (100, 50, 10) reduce to (10, 10, 10)") {
        Dataset d;
        d.features = Matrix(160, 2);
        for (auto& v : d.features.data) v = rng.gaussian();
        for (int i = 0; i < 100; ++i) d.labels.push_back(0);
        for (int i = 0; i < 50; ++i) d.labels.push_back(1);
        for (int i = 0; i < 10; ++i) d.labels.push_back(2);
        d.feature_names = {"x", "y"};
        d.class_names = {"a", "b", "c"};
        const Dataset out = undersample(d, rng);
        const auto counts = out.class_counts();
        CHECK(counts == std::vector<std::size_t>{10, 10, 10});

        // Every surviving row exists verbatim in the original data.
        for (std::size_t i = 0; i < out.n(); ++i) {
            bool found = false;
            for (std::size_t j = 0; j < d.n() && !found; ++j) {
                if (d.labels[j] != out.labels[i]) continue;
                bool same = true;
                for (std::size_t k = 0; k < 2; ++k)
                    same = same && d.features(j, k) == out.features(i, k);
                found = same;
            }
            CHECK(found);
        }
    }
    SUBCASE("a class with no samples is rejected") {
        Dataset d;
        d.features = Matrix(4, 1);
        d.labels = {0, 0, 1, 1};
        d.feature_names = {"x"};
        d.class_names = {"a", "b", "c"};  // class c never occurs
        CHECK_THROWS_AS(undersample(d, rng), std::invalid_argument);
    }
}

TEST_CASE("smote") {
    SeededRng rng(9);
    SUBCASE("balanced input is unchanged") {
        const Dataset d = synth_blobs(12, 2, 3, 1.0, rng);
        const Dataset out = smote(d, 5, rng);
        CHECK(out.n() == d.n());
    }
    SUBCASE("two-point minority synthesizes along the segment") {
        Dataset d;
        d.features = Matrix(8, 2);
        d.feature_names = {"x", "y"};
        d.class_names = {"maj", "min"};
        for (int i = 0; i < 6; ++i) {
            d.features(i, 0) = rng.gaussian();
            d.features(i, 1) = rng.gaussian();
            d.labels.push_back(0);
        }
        d.features(6, 0) = 0.0;
        d.features(6, 1) = 0.0;
        d.features(7, 0) = 2.0;
        d.features(7, 1) = 4.0;
        d.labels.push_back(1);
        d.labels.push_back(1);

        const Dataset out = smote(d, 5, rng);
        CHECK(out.class_counts() == std::vector<std::size_t>{6, 6});
        for (std::size_t i = 8; i < out.n(); ++i) {
            // On the segment: y = 2x with x in [0, 2].
            CHECK(out.features(i, 1) ==
                  doctest::Approx(2.0 * out.features(i, 0)).epsilon(1e-12));
            CHECK(out.features(i, 0) >= 0.0);
            CHECK(out.features(i, 0) <= 2.0);
        }
    }
    SUBCASE("synthetic points pass the segment-membership oracle") {
        SeededRng gen(10);
        Dataset d;
        const std::size_t n0 = 30, n1 = 9;
        d.features = Matrix(n0 + n1, 3);
        d.feature_names = {"a", "b", "c"};
        d.class_names = {"maj", "min"};
        for (std::size_t i = 0; i < n0 + n1; ++i) {
            for (int k = 0; k < 3; ++k) d.features(i, k) = gen.gaussian();
            d.labels.push_back(i < n0 ? 0 : 1);
        }
        const std::size_t k_neighbors = 4;
        const Dataset out = smote(d, k_neighbors, gen);
        REQUIRE(out.class_counts() == std::vector<std::size_t>{n0, n0});

        // Oracle: each synthetic point sits on a segment between a minority
        // point and one of its k nearest same-class neighbors.
        for (std::size_t s = n0 + n1; s < out.n(); ++s) {
            bool explained = false;
            for (std::size_t a = n0; a < n0 + n1 && !explained; ++a) {
                // neighbors of a among the original minority points
                std::vector<std::pair<double, std::size_t>> dist;
                for (std::size_t b = n0; b < n0 + n1; ++b) {
                    if (a == b) continue;
                    double d2 = 0.0;
                    for (int k = 0; k < 3; ++k) {
                        const double diff = d.features(a, k) - d.features(b, k);
                        d2 += diff * diff;
                    }
                    dist.emplace_back(d2, b);
                }
                std::stable_sort(dist.begin(), dist.end());
                for (std::size_t t = 0; t < k_neighbors && !explained; ++t) {
                    const std::size_t b = dist[t].second;
                    // Solve s = a + u (b - a) per coordinate and check agreement.
                    double u = -1.0;
                    bool ok = true;
                    for (int k = 0; k < 3 && ok; ++k) {
                        const double den = d.features(b, k) - d.features(a, k);
                        const double num = out.features(s, k) - d.features(a, k);
                        if (std::abs(den) < 1e-12) {
                            ok = std::abs(num) < 1e-9;
                        } else {
                            const double uk = num / den;
                            if (u < 0.0) u = uk;
                            ok = std::abs(uk - u) < 1e-9;
                        }
                    }
                    explained = ok && u >= -1e-12 && u <= 1.0 + 1e-12;
                }
            }
            CHECK(explained);
        }
    }
    SUBCASE("singleton minority class is rejected") {
        Dataset d;
        d.features = Matrix(4, 1);
        d.labels = {0, 0, 0, 1};
        d.feature_names = {"x"};
        d.class_names = {"a", "b"};
        CHECK_THROWS_AS(smote(d, 5, rng), std::invalid_argument);
    }
}

TEST_CASE("stratified split") {
    SeededRng rng(11);
    SUBCASE("counts follow the fractions within one sample per class") {
        Dataset d;
        d.features = Matrix(100, 2);
        for (int i = 0; i < 60; ++i) d.labels.push_back(0);
        for (int i = 0; i < 30; ++i) d.labels.push_back(1);
        for (int i = 0; i < 10; ++i) d.labels.push_back(2);
        d.feature_names = {"x", "y"};
        d.class_names = {"a", "b", "c"};
        const SplitIndices split = stratified_split(d, 0.70, 0.15, 0.15, rng);

        std::vector<std::size_t> train_counts(3, 0);
        for (std::size_t i : split.train) ++train_counts[d.labels[i]];
        CHECK(std::abs(static_cast<int>(train_counts[0]) - 42) <= 1);
        CHECK(std::abs(static_cast<int>(train_counts[1]) - 21) <= 1);
        CHECK(std::abs(static_cast<int>(train_counts[2]) - 7) <= 1);
    }
    SUBCASE("splits are disjoint and cover everything") {
        const Dataset d = synth_blobs(20, 3, 2, 1.0, rng);
        const SplitIndices split = stratified_split(d, 0.7, 0.15, 0.15, rng);
        std::set<std::size_t> all;
        for (std::size_t i : split.train) all.insert(i);
        for (std::size_t i : split.val) all.insert(i);
        for (std::size_t i : split.test) all.insert(i);
        CHECK(all.size() == 60);
        CHECK(split.train.size() + split.val.size() + split.test.size() == 60);
    }
    SUBCASE("the same seed reproduces the split") {
        const Dataset d = synth_blobs(20, 2, 2, 1.0, rng);
        SeededRng r1(42), r2(42);
        const SplitIndices a = stratified_split(d, 0.7, 0.15, 0.15, r1);
        const SplitIndices b = stratified_split(d, 0.7, 0.15, 0.15, r2);
        CHECK(a.train == b.train);
        CHECK(a.val == b.val);
        CHECK(a.test == b.test);
    }
    SUBCASE("tiny classes and bad fractions are rejected") {
        Dataset d;
        d.features = Matrix(4, 1);
        d.labels = {0, 0, 0, 1};
        d.feature_names = {"x"};
        d.class_names = {"a", "b"};
        CHECK_THROWS_AS(stratified_split(d, 0.7, 0.15, 0.15, rng),
                        std::invalid_argument);
        const Dataset ok = synth_blobs(10, 2, 2, 1.0, rng);
        CHECK_THROWS_AS(stratified_split(ok, 0.5, 0.2, 0.2, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("preprocessor persistence") {
    TempDir dir;
    SeededRng rng(15);
    Dataset d = synth_blobs(30, 3, 5, 2.0, rng);
    FittedPreprocessor prep = fit_standardize(d);
    prep.class_names = d.class_names;
    prep.onehot_maps = {{"job", {"artisan", "clerk"}}};
    const Dataset std_d = apply_standardize(prep, d);
    fit_pca(prep, std_d, 3);
    prep.balancing = Balancing::Smote;
    prep.smote_k = 4;
    prep.split = stratified_split(d, 0.7, 0.15, 0.15, rng);
    prep.seed = 15;

    prep.save(dir.file("prep.json"));
    const FittedPreprocessor back = FittedPreprocessor::load(dir.file("prep.json"));
    CHECK(back.means == prep.means);
    CHECK(back.stds == prep.stds);
    CHECK(back.kept_features == prep.kept_features);
    CHECK(back.class_names == prep.class_names);
    CHECK(back.onehot_maps.size() == 1);
    CHECK(back.onehot_maps[0].levels == prep.onehot_maps[0].levels);
    CHECK(back.pca_components.data == prep.pca_components.data);
    CHECK(back.pca_explained_variance == prep.pca_explained_variance);
    CHECK(back.balancing == Balancing::Smote);
    CHECK(back.split.train == prep.split.train);
    CHECK(back.content_hash() == prep.content_hash());

    // A parameter change shows up in the hash.
    FittedPreprocessor tweaked = prep;
    tweaked.means[0] += 1e-9;
    CHECK(tweaked.content_hash() != prep.content_hash());

    CHECK_THROWS_AS(FittedPreprocessor::load(dir.file("missing.json")),
                    std::runtime_error);
}

TEST_CASE("synthetic blobs") {
    SUBCASE("separation 10 is trivially classifiable by 1-NN") {
        SeededRng rng(12);
        const Dataset d = synth_blobs(40, 3, 6, 10.0, rng);
        CHECK(one_nn_accuracy(d) >= 0.99);
    }
    SUBCASE("separation 0 is class-blind") {
        SeededRng rng(13);
        const Dataset d = synth_blobs(200, 3, 6, 0.0, rng);
        CHECK(std::abs(one_nn_accuracy(d) - 1.0 / 3.0) < 0.1);
    }
    SUBCASE("deterministic under a fixed seed") {
        SeededRng r1(14), r2(14);
        const Dataset a = synth_blobs(10, 2, 4, 3.0, r1);
        const Dataset b = synth_blobs(10, 2, 4, 3.0, r2);
        CHECK(a.features.data == b.features.data);
        CHECK(a.labels == b.labels);
    }
}

}  // TEST_SUITE
