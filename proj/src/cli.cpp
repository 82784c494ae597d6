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
#include "iqnncs/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "iqnncs/report.hpp"
#include "iqnncs/run_config.hpp"

namespace iqnncs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PreparedData {
    Dataset raw;
    FittedPreprocessor prep;
    Dataset train;  // balanced (train split only)
    Dataset val;
    Dataset test;
};

/// The full data preparation pipeline: ingest, stratified split, standardize
/// and PCA fitted on the train split, balancing applied to the train split.
PreparedData prepare_data(const RunConfig& cfg) {
    if (cfg.data_csv.empty() || cfg.schema_path.empty())
        throw std::runtime_error("need --data and --schema (or a config file)");
    const ColumnSchema schema = ColumnSchema::load(cfg.schema_path);
    PreparedData pd;
    std::vector<OneHotMap> maps;
    pd.raw = load_csv(cfg.data_csv, schema, nullptr, &maps);

    SeededRng rng(cfg.seed);
    const SplitIndices split =
        stratified_split(pd.raw, cfg.f_train, cfg.f_val, cfg.f_test, rng);
    const Dataset train_raw = select_rows(pd.raw, split.train);
    const Dataset val_raw = select_rows(pd.raw, split.val);
    const Dataset test_raw = select_rows(pd.raw, split.test);

    pd.prep = fit_standardize(train_raw);
    pd.prep.onehot_maps = maps;
    pd.prep.class_names = pd.raw.class_names;
    pd.prep.split = split;
    pd.prep.seed = cfg.seed;
    pd.prep.balancing = cfg.balancing;
    pd.prep.smote_k = cfg.smote_k;

    const Dataset train_std = apply_standardize(pd.prep, train_raw);
    fit_pca(pd.prep, train_std, cfg.pca_components);

    pd.train = apply_pca(pd.prep, train_std);
    pd.val = apply_pca(pd.prep, apply_standardize(pd.prep, val_raw));
    pd.test = apply_pca(pd.prep, apply_standardize(pd.prep, test_raw));

    switch (cfg.balancing) {
        case Balancing::Undersample:
            pd.train = undersample(pd.train, rng);
            break;
        case Balancing::Smote:
            pd.train = smote(pd.train, cfg.smote_k, rng);
            break;
        case Balancing::None:
            break;
    }
    return pd;
}

/// Re-apply a persisted preprocessor: same one-hot maps, same class order,
/// same split, same standardization and PCA.
struct AppliedData {
    Dataset train, val, test;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
};

AppliedData apply_preprocessor(const FittedPreprocessor& prep,
                               const std::string& csv_path,
                               const std::string& schema_path) {
    ColumnSchema schema = ColumnSchema::load(schema_path);
    if (!prep.class_names.empty()) schema.classes = prep.class_names;
    const Dataset raw = load_csv(csv_path, schema, &prep.onehot_maps, nullptr);
    AppliedData ad;
    ad.class_names = raw.class_names;
    auto transform = [&prep](const Dataset& d) {
        return apply_pca(prep, apply_standardize(prep, d));
    };
    ad.train = transform(select_rows(raw, prep.split.train));
    ad.val = transform(select_rows(raw, prep.split.val));
    ad.test = transform(select_rows(raw, prep.split.test));
    ad.feature_names = ad.test.feature_names;
    return ad;
}

const Dataset& pick_split(const AppliedData& ad, const std::string& split) {
    if (split == "train") return ad.train;
    if (split == "val") return ad.val;
    if (split == "test") return ad.test;
    throw std::runtime_error("unknown split: " + split);
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* env = std::getenv("IQNNCS_SEED");
    if (!env) return fallback;
    return std::strtoull(env, nullptr, 10);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out);
    return (fs::path(cfg.out) / name).string();
}

int cmd_synth(const RunConfig& cfg, std::size_t n_per_class, std::size_t classes,
              std::size_t dim, double separation) {
    SeededRng rng(cfg.seed);
    const Dataset data = synth_blobs(n_per_class, classes, dim, separation, rng);
    write_csv(data, out_path(cfg, "data.csv"));
    ColumnSchema schema;
    schema.numeric = data.feature_names;
    schema.label = "label";
    schema.classes = data.class_names;
    schema.save(out_path(cfg, "schema.json"));
    std::cout << "wrote " << data.n() << " samples to " << cfg.out << "/data.csv\n";
    return 0;
}

int cmd_preprocess(const RunConfig& cfg) {
    const PreparedData pd = prepare_data(cfg);
    pd.prep.save(out_path(cfg, "preprocessor.json"));
    write_csv(pd.train, out_path(cfg, "train.csv"));
    write_csv(pd.val, out_path(cfg, "val.csv"));
    write_csv(pd.test, out_path(cfg, "test.csv"));
    ColumnSchema processed;
    processed.numeric = pd.train.feature_names;
    processed.label = "label";
    processed.classes = pd.train.class_names;
    processed.save(out_path(cfg, "processed_schema.json"));
    std::cout << "preprocessed splits: train " << pd.train.n() << ", val "
              << pd.val.n() << ", test " << pd.test.n() << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    const PreparedData pd = prepare_data(cfg);
    pd.prep.save(out_path(cfg, "preprocessor.json"));

    SeededRng model_rng(cfg.seed);
    const HybridModel init =
        make_model(pd.train.dim(), cfg.circuit, cfg.post_hidden,
                   pd.raw.n_classes(), cfg.dropout, model_rng);
    const TrainResult result = train(init, pd.train, pd.val, pd.test, cfg.training);

    save_checkpoint(result.model, out_path(cfg, "checkpoint.json"),
                    pd.prep.content_hash());

    const ClassWeights weights =
        ClassWeights::inverse_frequency(pd.train.labels, pd.raw.n_classes());
    const EvalResult test_eval = evaluate_model(result.model, pd.test, weights);
    const EvaluationReport report =
        compute_metrics(pd.test.labels, test_eval.predictions, pd.raw.n_classes());

    ReportBundle bundle;
    bundle.metrics = report;
    bundle.class_names = pd.raw.class_names;
    bundle.history = result.history;
    emit_report(bundle, cfg.out);

    std::cout << "trained " << result.history.epochs_run() << " epochs (best "
              << result.history.best_epoch << (result.history.stopped_early
                                                   ? ", stopped early"
                                                   : "")
              << "); test accuracy " << report.accuracy << "\n";
    return 0;
}

struct LoadedRun {
    CheckpointData ckpt;
    FittedPreprocessor prep;
    AppliedData data;
};

LoadedRun load_run(const RunConfig& cfg, const std::string& checkpoint_path,
                   const std::string& preprocessor_path) {
    LoadedRun run;
    run.prep = FittedPreprocessor::load(preprocessor_path);
    run.ckpt = load_checkpoint(checkpoint_path);
    if (!run.ckpt.preprocessor_hash.empty() &&
        run.ckpt.preprocessor_hash != run.prep.content_hash())
        throw std::runtime_error(
            "checkpoint was trained with a different preprocessor (hash mismatch)");
    run.data = apply_preprocessor(run.prep, cfg.data_csv, cfg.schema_path);
    if (run.ckpt.model.n_classes() != run.data.class_names.size())
        throw std::runtime_error("checkpoint is incompatible: trained for " +
                                 std::to_string(run.ckpt.model.n_classes()) +
                                 " classes, data has " +
                                 std::to_string(run.data.class_names.size()));
    return run;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& checkpoint_path,
                 const std::string& preprocessor_path, const std::string& split) {
    const LoadedRun run = load_run(cfg, checkpoint_path, preprocessor_path);
    const Dataset& data = pick_split(run.data, split);
    const ClassWeights weights = ClassWeights::uniform(run.ckpt.model.n_classes());
    const EvalResult eval = evaluate_model(run.ckpt.model, data, weights);
    const EvaluationReport report =
        compute_metrics(data.labels, eval.predictions, run.ckpt.model.n_classes());
    ReportBundle bundle;
    bundle.metrics = report;
    bundle.class_names = run.data.class_names;
    emit_report(bundle, cfg.out);
    std::cout << "split " << split << ": accuracy " << report.accuracy
              << ", macro F1 " << report.macro_f1 << "\n";
    return 0;
}

int cmd_explain(const RunConfig& cfg, const std::string& checkpoint_path,
                const std::string& preprocessor_path, const std::string& split,
                std::vector<std::size_t> instances,
                std::vector<std::string> methods, int fixed_class) {
    const LoadedRun run = load_run(cfg, checkpoint_path, preprocessor_path);
    const Dataset& data = pick_split(run.data, split);
    const HybridModel& model = run.ckpt.model;

    if (instances.empty() && !data.n()) throw std::runtime_error("empty split");
    if (instances.empty()) instances = {0};
    for (std::size_t id : instances)
        if (id >= data.n())
            throw std::runtime_error("instance " + std::to_string(id) +
                                     " out of range for split of size " +
                                     std::to_string(data.n()));

    static const std::set<std::string> known{
        "all",       "saliency",   "gxi",        "ig",
        "smoothgrad", "icaa",      "occlusion",  "prototypes",
        "indecision", "entropy",   "similarity"};
    for (const auto& m : methods)
        if (!known.count(m))
            throw std::runtime_error("unknown explain method: " + m);
    std::set<std::string> want(methods.begin(), methods.end());
    if (want.empty() || want.count("all")) {
        want.insert({"saliency", "gxi", "ig", "smoothgrad", "icaa",
                     "occlusion", "prototypes", "indecision", "entropy"});
    }

    ReportBundle bundle;
    bundle.class_names = run.data.class_names;
    bundle.feature_names = run.data.feature_names;
    const Dataset& train_split = run.data.train;

    for (std::size_t id : instances) {
        const std::vector<double> x = data.sample(id);
        const auto logits = model_forward(model, x, false, nullptr, nullptr);
        const std::size_t target =
            fixed_class >= 0 ? static_cast<std::size_t>(fixed_class)
                             : static_cast<std::size_t>(
                                   std::max_element(logits.begin(), logits.end()) -
                                   logits.begin());
        if (target >= model.n_classes())
            throw std::runtime_error("--class out of range");

        const std::vector<double> baseline(x.size(), cfg.occlusion_baseline);
        if (want.count("saliency"))
            bundle.attributions.push_back(saliency(model, x, target, id));
        if (want.count("gxi"))
            bundle.attributions.push_back(grad_times_input(model, x, target, id));
        if (want.count("ig")) {
            const AttributionVector ig = integrated_gradients(
                model, x, target, baseline, cfg.ig_steps, id);
            bundle.attributions.push_back(ig);
            // Record the completeness identity the method is supposed to satisfy.
            const double sum =
                std::accumulate(ig.scores.begin(), ig.scores.end(), 0.0);
            const auto base_logits =
                model_forward(model, baseline, false, nullptr, nullptr);
            const double delta = logits[target] - base_logits[target];
            json jc{{"instance", id},
                    {"attribution_sum", sum},
                    {"logit_delta", delta},
                    {"relative_error",
                     delta != 0.0 ? std::abs(sum - delta) / std::abs(delta) : 0.0}};
            std::ofstream(out_path(cfg, "ig_completeness_" + std::to_string(id) +
                                            ".json"))
                << jc.dump(2) << '\n';
        }
        if (want.count("smoothgrad")) {
            SeededRng rng(cfg.seed);
            bundle.attributions.push_back(
                smoothgrad(model, x, target, cfg.smoothgrad_samples,
                           cfg.smoothgrad_sigma, rng, id));
        }
        if (want.count("icaa")) {
            IcaaOptions opt;
            bundle.icaa_matrices.emplace_back(id, icaa(model, x, opt));
        }
        if (want.count("occlusion")) {
            const AttributionVector sal = saliency(model, x, target, id);
            bundle.occlusions.emplace_back(
                id, occlusion_curve(model, x, attribution_ranking(sal), baseline));
        }
        if (want.count("prototypes"))
            bundle.prototypes.emplace_back(
                id, prototype_match(model, x, data.labels[id], train_split,
                                    cfg.prototype_top_k));
    }

    if (want.count("indecision")) {
        Dataset selected = select_rows(data, instances);
        SeededRng rng(cfg.seed);
        IndecisionReport report = indecision_scan(
            model, selected, cfg.indecision_perturbations, cfg.indecision_sigma,
            cfg.indecision_threshold, rng);
        report.sample_ids = instances;  // report original split indices
        bundle.indecision = std::move(report);
    }
    if (want.count("entropy"))
        bundle.entropy = entropy_stats(model, data);
    if (want.count("similarity")) {
        std::optional<std::size_t> fixed;
        if (fixed_class >= 0) fixed = static_cast<std::size_t>(fixed_class);
        const Matrix sim = attribution_similarity_matrix(
            model, data, AttributionMethod::SignedGradient, fixed);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < sim.rows; ++i) labels.push_back(std::to_string(i));
        std::ofstream sv(out_path(cfg, "attribution_similarity.svg"));
        sv << svg_heatmap(sim, labels, labels, "Attribution similarity", -1.0, 1.0);
        std::ofstream cs(out_path(cfg, "attribution_similarity.csv"));
        cs << "i,j,similarity\n";
        char buf[32];
        for (std::size_t i = 0; i < sim.rows; ++i)
            for (std::size_t j = 0; j < sim.cols; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", sim(i, j));
                cs << i << ',' << j << ',' << buf << '\n';
            }
    }

    emit_report(bundle, cfg.out);
    std::cout << "explained " << instances.size() << " instance(s) from the "
              << split << " split into " << cfg.out << "\n";
    return 0;
}

int cmd_embed(const RunConfig& cfg, const std::string& checkpoint_path,
              const std::string& preprocessor_path, const std::string& split) {
    const LoadedRun run = load_run(cfg, checkpoint_path, preprocessor_path);
    const Dataset& data = pick_split(run.data, split);
    Matrix activations(data.n(), run.ckpt.model.circuit.n_qubits);
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto act = quantum_activation(run.ckpt.model, data.sample(i));
        for (std::size_t k = 0; k < act.size(); ++k) activations(i, k) = act[k];
    }
    TsneConfig tsne;
    tsne.perplexity = cfg.tsne_perplexity;
    tsne.iterations = cfg.tsne_iterations;
    tsne.seed = cfg.seed;
    const Embedding2D embedding = tsne_embed(activations, data.labels, tsne);
    ReportBundle bundle;
    bundle.class_names = run.data.class_names;
    bundle.embedding = embedding;
    emit_report(bundle, cfg.out);
    std::cout << "embedded " << data.n() << " samples from the " << split
              << " split\n";
    return 0;
}

/// --config must be applied before the other flags override it, so it is
/// pulled out of the argument list ahead of CLI11 parsing.
std::string prescan_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return "";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    RunConfig cfg;
    cfg.seed = seed_from_env(cfg.seed);
    try {
        const std::string config_path = prescan_config(args);
        if (!config_path.empty()) cfg.load_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"IQNN-CS: interpretable hybrid quantum-classical credit scoring"};
    app.require_subcommand(1);
    // Inherited by every subcommand: global flags (--seed, --out, --config)
    // may appear after the subcommand name.
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", cfg.seed, "random seed (overrides config/env)");
    app.add_option("--out", cfg.out, "output directory");

    // synth
    std::size_t synth_n = 100, synth_classes = 3, synth_dim = 6;
    double synth_sep = 6.0;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--n-per-class", synth_n, "samples per class");
    synth->add_option("--classes", synth_classes, "number of classes");
    synth->add_option("--dim", synth_dim, "feature dimension");
    synth->add_option("--separation", synth_sep, "class mean separation");

    auto add_data_opts = [&cfg](CLI::App* sub) {
        sub->add_option("--data", cfg.data_csv, "input CSV file");
        sub->add_option("--schema", cfg.schema_path, "column schema JSON");
    };
    auto add_prep_opts = [&cfg](CLI::App* sub) {
        sub->add_option("--pca", cfg.pca_components, "PCA components");
        sub->add_option_function<std::string>(
            "--balance",
            [&cfg](const std::string& s) { cfg.balancing = balancing_from_string(s); },
            "class balancing: none|undersample|smote");
        sub->add_option("--smote-k", cfg.smote_k, "SMOTE neighbor count");
    };

    CLI::App* preprocess =
        app.add_subcommand("preprocess", "fit and apply the preparation pipeline");
    add_data_opts(preprocess);
    add_prep_opts(preprocess);

    CLI::App* train_cmd = app.add_subcommand("train", "train the hybrid model");
    add_data_opts(train_cmd);
    add_prep_opts(train_cmd);
    train_cmd->add_option("--epochs", cfg.training.epochs, "training epochs");
    train_cmd->add_option("--batch-size", cfg.training.batch_size, "mini-batch size");
    train_cmd->add_option("--lr", cfg.training.lr, "base learning rate");
    train_cmd->add_option("--patience", cfg.training.patience,
                          "early-stopping patience (epochs)");
    train_cmd->add_option("--weight-decay", cfg.training.weight_decay,
                          "AdamW decoupled weight decay");
    train_cmd->add_option("--qubits", cfg.circuit.n_qubits, "number of qubits");
    train_cmd->add_option("--layers", cfg.circuit.n_layers, "entangling layers");
    train_cmd->add_option("--hidden", cfg.post_hidden, "post-net hidden width");
    train_cmd->add_option("--dropout", cfg.dropout, "post-net dropout rate");
    train_cmd->add_option_function<std::string>(
        "--scheduler",
        [&cfg](const std::string& s) {
            cfg.training.scheduler.kind = (s == "cosine")
                                              ? SchedulerKind::CosineAnnealing
                                              : SchedulerKind::StepLr;
        },
        "learning-rate scheduler: step|cosine");

    std::string checkpoint_path = "run/checkpoint.json";
    std::string preprocessor_path = "run/preprocessor.json";
    std::string split = "test";
    auto add_run_opts = [&](CLI::App* sub) {
        sub->add_option("--checkpoint", checkpoint_path, "checkpoint JSON");
        sub->add_option("--preprocessor", preprocessor_path, "preprocessor JSON");
        sub->add_option("--split", split, "train|val|test");
        add_data_opts(sub);
    };

    CLI::App* evaluate = app.add_subcommand("evaluate", "metrics on a split");
    add_run_opts(evaluate);

    CLI::App* explain = app.add_subcommand(
        "explain", "post-hoc interpretability for selected instances");
    add_run_opts(explain);
    std::vector<std::size_t> instances;
    std::vector<std::string> methods;
    int fixed_class = -1;
    explain->add_option("--instance,--instances", instances,
                        "instance indices within the split");
    explain->add_option("--method,--methods", methods,
                        "saliency|gxi|ig|smoothgrad|icaa|occlusion|prototypes|"
                        "indecision|entropy|similarity|all");
    explain->add_option("--class", fixed_class,
                        "fixed attribution class (default: predicted)");
    explain->add_option("--ig-steps", cfg.ig_steps, "integrated-gradients steps");
    explain->add_option("--smoothgrad-samples", cfg.smoothgrad_samples,
                        "SmoothGrad sample count");
    explain->add_option("--smoothgrad-sigma", cfg.smoothgrad_sigma,
                        "SmoothGrad noise std");
    explain->add_option("--perturbations", cfg.indecision_perturbations,
                        "indecision-scan perturbation count");
    explain->add_option("--indecision-sigma", cfg.indecision_sigma,
                        "indecision-scan noise std");
    explain->add_option("--threshold", cfg.indecision_threshold,
                        "indecision flag threshold");
    explain->add_option("--top-k", cfg.prototype_top_k, "prototype matches kept");

    CLI::App* embed =
        app.add_subcommand("embed", "t-SNE of quantum activations");
    add_run_opts(embed);
    embed->add_option("--perplexity", cfg.tsne_perplexity, "t-SNE perplexity");
    embed->add_option("--iterations", cfg.tsne_iterations, "t-SNE iterations");

    std::string run_dir;
    CLI::App* report_cmd =
        app.add_subcommand("report", "render SVGs and a method summary for a run");
    report_cmd->add_option("--run", run_dir, "run directory with artifacts")
        ->required();

    std::vector<std::string> argv_copy = args;
    std::reverse(argv_copy.begin(), argv_copy.end());
    try {
        app.parse(argv_copy);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        cfg.sync_seed();
        if (synth->parsed())
            return cmd_synth(cfg, synth_n, synth_classes, synth_dim, synth_sep);
        if (preprocess->parsed()) return cmd_preprocess(cfg);
        if (train_cmd->parsed()) return cmd_train(cfg);
        if (evaluate->parsed())
            return cmd_evaluate(cfg, checkpoint_path, preprocessor_path, split);
        if (explain->parsed())
            return cmd_explain(cfg, checkpoint_path, preprocessor_path, split,
                               instances, methods, fixed_class);
        if (embed->parsed())
            return cmd_embed(cfg, checkpoint_path, preprocessor_path, split);
        if (report_cmd->parsed()) {
            assemble_report(run_dir);
            std::cout << "report assembled in " << run_dir << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand given\n" << app.help();
    return 2;
}

}  // namespace iqnncs
