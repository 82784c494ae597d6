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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "iqnncs/cli.hpp"
#include "iqnncs/report.hpp"

using namespace iqnncs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("iqnncs_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Small, fast pipeline configuration shared by the CLI tests.
std::vector<std::string> tiny_train_args(const std::string& data,
                                         const std::string& schema,
                                         const std::string& out,
                                         const std::string& seed = "42") {
    return {"train",        "--data",   data,   "--schema", schema,
            "--out",        out,        "--seed", seed,      "--pca",
            "4",            "--qubits", "3",    "--layers", "1",
            "--hidden",     "6",        "--epochs", "6",    "--batch-size",
            "16",           "--lr",     "0.05", "--patience", "6",
            "--dropout",    "0.0"};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth then train then evaluate reaches high accuracy") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    const std::string run_dir = dir.file("run");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "40",
                     "--classes", "3", "--dim", "5", "--separation", "8",
                     "--seed", "42"}) == 0);
    REQUIRE(fs::exists(data_dir + "/data.csv"));
    REQUIRE(fs::exists(data_dir + "/schema.json"));

    REQUIRE(run_cli(tiny_train_args(data_dir + "/data.csv",
                                    data_dir + "/schema.json", run_dir)) == 0);
    REQUIRE(fs::exists(run_dir + "/checkpoint.json"));
    REQUIRE(fs::exists(run_dir + "/history.csv"));
    REQUIRE(fs::exists(run_dir + "/metrics.json"));

    const json metrics = json::parse(slurp(run_dir + "/metrics.json"));
    CHECK(metrics["accuracy"].get<double>() >= 0.95);

    const std::string eval_dir = dir.file("eval");
    REQUIRE(run_cli({"evaluate", "--checkpoint", run_dir + "/checkpoint.json",
                     "--preprocessor", run_dir + "/preprocessor.json", "--data",
                     data_dir + "/data.csv", "--schema",
                     data_dir + "/schema.json", "--split", "test", "--out",
                     eval_dir}) == 0);
    const json eval_metrics = json::parse(slurp(eval_dir + "/metrics.json"));
    CHECK(eval_metrics["accuracy"].get<double>() >= 0.95);
}

TEST_CASE("train with the same seed twice is byte-identical") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "25",
                     "--classes", "2", "--dim", "4", "--separation", "6",
                     "--seed", "7"}) == 0);
    const std::string a = dir.file("a");
    const std::string b = dir.file("b");
    for (const auto& out : {a, b})
        REQUIRE(run_cli(tiny_train_args(data_dir + "/data.csv",
                                        data_dir + "/schema.json", out)) == 0);
    for (const char* name :
         {"history.csv", "checkpoint.json", "metrics.json", "preprocessor.json",
          "confusion.csv"})
        CHECK(slurp(a + "/" + name) == slurp(b + "/" + name));
}

TEST_CASE("explain emits the requested artifacts") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    const std::string run_dir = dir.file("run");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "30",
                     "--classes", "3", "--dim", "5", "--separation", "8",
                     "--seed", "42"}) == 0);
    REQUIRE(run_cli(tiny_train_args(data_dir + "/data.csv",
                                    data_dir + "/schema.json", run_dir)) == 0);

    SUBCASE("icaa for one instance") {
        const std::string out = dir.file("exp1");
        REQUIRE(run_cli({"explain", "--checkpoint", run_dir + "/checkpoint.json",
                         "--preprocessor", run_dir + "/preprocessor.json",
                         "--data", data_dir + "/data.csv", "--schema",
                         data_dir + "/schema.json", "--method", "icaa",
                         "--instance", "7", "--instance", "1", "--out", out}) == 0);
        REQUIRE(fs::exists(out + "/icaa_7.json"));
        REQUIRE(fs::exists(out + "/icaa_1.json"));
        for (const char* name : {"icaa_7.json", "icaa_1.json"}) {
            const json icaa_json = json::parse(slurp(out + "/" + std::string(name)));
            const auto& m = icaa_json["matrix"];
            REQUIRE(m.size() == 3);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    REQUIRE(m[i][j].is_null() == m[j][i].is_null());
                    if (!m[i][j].is_null())
                        CHECK(m[i][j].get<double>() ==
                              doctest::Approx(m[j][i].get<double>()).epsilon(1e-10));
                }
        }
        // Instance 1 has live gradients, so its matrix is fully defined.
        const json live = json::parse(slurp(out + "/icaa_1.json"));
        CHECK(live["undefined_classes"].empty());
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(live["matrix"][c][c].get<double>() ==
                  doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("attribution similarity over the split, with a fixed class") {
        const std::string out = dir.file("sim");
        REQUIRE(run_cli({"explain", "--checkpoint", run_dir + "/checkpoint.json",
                         "--preprocessor", run_dir + "/preprocessor.json",
                         "--data", data_dir + "/data.csv", "--schema",
                         data_dir + "/schema.json", "--method", "similarity",
                         "--class", "1", "--out", out}) == 0);
        CHECK(fs::exists(out + "/attribution_similarity.csv"));
        CHECK(fs::exists(out + "/attribution_similarity.svg"));
    }
    SUBCASE("an unknown method name is an error") {
        CHECK(run_cli({"explain", "--checkpoint", run_dir + "/checkpoint.json",
                       "--preprocessor", run_dir + "/preprocessor.json",
                       "--data", data_dir + "/data.csv", "--schema",
                       data_dir + "/schema.json", "--method", "bogus", "--out",
                       dir.file("x")}) == 1);
    }
    SUBCASE("full method set plus prototypes and indecision") {
        const std::string out = dir.file("exp2");
        REQUIRE(run_cli({"explain", "--checkpoint", run_dir + "/checkpoint.json",
                         "--preprocessor", run_dir + "/preprocessor.json",
                         "--data", data_dir + "/data.csv", "--schema",
                         data_dir + "/schema.json", "--instances", "0", "--instances", "2",
                         "--out", out, "--ig-steps", "32",
                         "--smoothgrad-samples", "5", "--perturbations", "5"}) == 0);
        CHECK(fs::exists(out + "/attributions_0_saliency.csv"));
        CHECK(fs::exists(out + "/attributions_2_integrated_gradients.csv"));
        CHECK(fs::exists(out + "/occlusion_0.csv"));
        CHECK(fs::exists(out + "/prototypes_0.csv"));
        CHECK(fs::exists(out + "/indecision.csv"));
        CHECK(fs::exists(out + "/entropy.csv"));
        CHECK(fs::exists(out + "/icaa_2.svg"));
        CHECK(fs::exists(out + "/ig_completeness_0.json"));

        // report assembly over the produced artifacts
        REQUIRE(run_cli({"report", "--run", out}) == 0);
        CHECK(fs::exists(out + "/method_summary.json"));
    }
}

TEST_CASE("embed writes t-SNE coordinates for the chosen split") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    const std::string run_dir = dir.file("run");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "30",
                     "--classes", "2", "--dim", "4", "--separation", "8",
                     "--seed", "11"}) == 0);
    REQUIRE(run_cli(tiny_train_args(data_dir + "/data.csv",
                                    data_dir + "/schema.json", run_dir, "11")) == 0);
    const std::string out = dir.file("emb");
    REQUIRE(run_cli({"embed", "--checkpoint", run_dir + "/checkpoint.json",
                     "--preprocessor", run_dir + "/preprocessor.json", "--data",
                     data_dir + "/data.csv", "--schema",
                     data_dir + "/schema.json", "--split", "train", "--out", out,
                     "--iterations", "150", "--perplexity", "8"}) == 0);
    REQUIRE(fs::exists(out + "/embedding.csv"));
    const Embedding2D e = read_embedding_csv(out + "/embedding.csv");
    CHECK(e.coords.rows == 42);  // 70% of 60
    CHECK(fs::exists(out + "/embedding.svg"));
}

TEST_CASE("preprocess persists the pipeline and split CSVs") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "20",
                     "--classes", "3", "--dim", "5", "--separation", "4",
                     "--seed", "3"}) == 0);
    const std::string out = dir.file("prep");
    REQUIRE(run_cli({"preprocess", "--data", data_dir + "/data.csv", "--schema",
                     data_dir + "/schema.json", "--pca", "3", "--out", out,
                     "--seed", "3", "--balance", "undersample"}) == 0);
    CHECK(fs::exists(out + "/preprocessor.json"));
    CHECK(fs::exists(out + "/train.csv"));
    CHECK(fs::exists(out + "/val.csv"));
    CHECK(fs::exists(out + "/test.csv"));
    const json prep = json::parse(slurp(out + "/preprocessor.json"));
    CHECK(prep["balancing"] == "undersample");
    CHECK(prep["pca_components"].size() == 3);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"train", "--no-such-flag"}) == 2);
    CHECK(run_cli({}) == 2);
}

TEST_CASE("config file values are applied and flags override them") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "25",
                     "--classes", "2", "--dim", "4", "--separation", "6",
                     "--seed", "9"}) == 0);
    const json config{
        {"seed", 9},
        {"out", dir.file("from_config")},
        {"data",
         {{"csv", data_dir + "/data.csv"}, {"schema", data_dir + "/schema.json"}}},
        {"preprocessing", {{"pca_components", 4}}},
        {"circuit", {{"n_qubits", 3}, {"n_layers", 1}}},
        {"model", {{"post_hidden", 6}, {"dropout", 0.0}}},
        {"training",
         {{"epochs", 4},
          {"batch_size", 16},
          {"learning_rate", 0.05},
          {"patience", 4}}}};
    std::ofstream(dir.file("config.json")) << config.dump(2);

    REQUIRE(run_cli({"train", "--config", dir.file("config.json")}) == 0);
    CHECK(fs::exists(dir.file("from_config") + "/checkpoint.json"));
    const json ckpt =
        json::parse(slurp(dir.file("from_config") + "/checkpoint.json"));
    CHECK(ckpt["circuit"]["n_qubits"] == 3);

    // A flag on the command line beats the file value.
    REQUIRE(run_cli({"train", "--config", dir.file("config.json"), "--out",
                     dir.file("flag_wins"), "--epochs", "2", "--patience",
                     "2"}) == 0);
    const TrainingHistory h =
        read_history_csv(dir.file("flag_wins") + "/history.csv");
    CHECK(h.epochs_run() == 2);
}

TEST_CASE("IQNNCS_SEED is the seed fallback") {
    TempDir dir;
    ::setenv("IQNNCS_SEED", "1234", 1);
    const std::string a = dir.file("a");
    const std::string b = dir.file("b");
    REQUIRE(run_cli({"synth", "--out", a, "--n-per-class", "5", "--classes", "2",
                     "--dim", "3", "--separation", "2"}) == 0);
    REQUIRE(run_cli({"synth", "--out", b, "--n-per-class", "5", "--classes", "2",
                     "--dim", "3", "--separation", "2"}) == 0);
    CHECK(slurp(a + "/data.csv") == slurp(b + "/data.csv"));
    // An explicit flag still wins over the environment.
    const std::string c = dir.file("c");
    REQUIRE(run_cli({"synth", "--out", c, "--n-per-class", "5", "--classes", "2",
                     "--dim", "3", "--separation", "2", "--seed", "77"}) == 0);
    CHECK(slurp(a + "/data.csv") != slurp(c + "/data.csv"));
    ::unsetenv("IQNNCS_SEED");
}

TEST_CASE("missing files exit with code 1 and a diagnostic") {
    CHECK(run_cli({"train", "--data", "/nonexistent.csv", "--schema",
                   "/nonexistent.json"}) == 1);
    CHECK(run_cli({"report", "--run", "/nonexistent_dir_xyz"}) == 1);
}

TEST_CASE("checkpoint and preprocessor must match") {
    TempDir dir;
    const std::string data_dir = dir.file("data");
    REQUIRE(run_cli({"synth", "--out", data_dir, "--n-per-class", "25",
                     "--classes", "2", "--dim", "4", "--separation", "6",
                     "--seed", "5"}) == 0);
    const std::string a = dir.file("a");
    REQUIRE(run_cli(tiny_train_args(data_dir + "/data.csv",
                                    data_dir + "/schema.json", a, "5")) == 0);
    // A second run with a different seed fits a different preprocessor.
    const std::string b = dir.file("b");
    REQUIRE(run_cli(tiny_train_args(data_dir + "/data.csv",
                                    data_dir + "/schema.json", b, "6")) == 0);
    CHECK(run_cli({"evaluate", "--checkpoint", a + "/checkpoint.json",
                   "--preprocessor", b + "/preprocessor.json", "--data",
                   data_dir + "/data.csv", "--schema", data_dir + "/schema.json",
                   "--out", dir.file("x")}) == 1);
}

}  // TEST_SUITE
