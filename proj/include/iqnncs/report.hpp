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

#include <optional>
#include <string>
#include <vector>

#include "iqnncs/hybrid_model.hpp"
#include "iqnncs/interpret.hpp"
#include "iqnncs/metrics.hpp"
#include "iqnncs/tsne.hpp"

namespace iqnncs {

// Canonical machine-readable artifacts. Every writer is deterministic:
// identical inputs produce byte-identical files.

void write_metrics_json(const EvaluationReport& report,
                        const std::vector<std::string>& class_names,
                        const std::string& path);
EvaluationReport read_metrics_json(const std::string& path);

/// Long format: epoch,split,loss,acc with one row per split per epoch.
void write_history_csv(const TrainingHistory& history, const std::string& path);
TrainingHistory read_history_csv(const std::string& path);

void write_confusion_csv(const EvaluationReport& report,
                         const std::vector<std::string>& class_names,
                         const std::string& path);

void write_attribution_csv(const AttributionVector& attribution,
                           const std::vector<std::string>& feature_names,
                           const std::string& path);

void write_icaa_json(const IcaaMatrix& matrix, std::size_t instance_id,
                     const std::vector<std::string>& class_names,
                     const std::string& path);
IcaaMatrix read_icaa_json(const std::string& path);

void write_occlusion_csv(const OcclusionCurve& curve, const std::string& path);
OcclusionCurve read_occlusion_csv(const std::string& path);

void write_indecision_csv(const IndecisionReport& report, const std::string& path);
IndecisionReport read_indecision_csv(const std::string& path);

void write_entropy_csv(const EntropyStats& stats, const std::string& path);
void write_entropy_histogram_csv(const EntropyStats& stats, const std::string& path);

void write_embedding_csv(const Embedding2D& embedding, const std::string& path);
Embedding2D read_embedding_csv(const std::string& path);

void write_prototypes_csv(const std::vector<PrototypeMatch>& matches,
                          const std::string& path);

// Minimal dependency-free SVG rendering; CSV/JSON stay the canonical outputs.

/// "#rrggbb" on a white-to-dark-blue ramp; every channel is monotone
/// non-increasing in value so cell shading orders like the data.
std::string heat_color(double value, double vmin, double vmax);

std::string svg_heatmap(const Matrix& values,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const std::string& title, double vmin, double vmax);

struct LineSeries {
    std::string name;
    std::vector<double> ys;
};
std::string svg_line_chart(const std::vector<LineSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label);

std::string svg_scatter(const Embedding2D& embedding, const std::string& title);

std::string svg_histogram(const std::vector<double>& bin_edges,
                          const std::vector<std::size_t>& counts,
                          const std::string& title, const std::string& x_label);

/// Everything one run can produce; emit_report writes each artifact that is
/// present plus its rendered SVG.
struct ReportBundle {
    std::optional<EvaluationReport> metrics;
    std::vector<std::string> class_names;
    std::optional<TrainingHistory> history;
    std::vector<AttributionVector> attributions;
    std::vector<std::string> feature_names;
    std::vector<std::pair<std::size_t, IcaaMatrix>> icaa_matrices;
    std::vector<std::pair<std::size_t, OcclusionCurve>> occlusions;
    std::vector<std::pair<std::size_t, std::vector<PrototypeMatch>>> prototypes;
    std::optional<IndecisionReport> indecision;
    std::optional<EntropyStats> entropy;
    std::optional<Embedding2D> embedding;
};

void emit_report(const ReportBundle& bundle, const std::string& outdir);

/// Re-render SVGs for every recognized artifact in a run directory and write
/// method_summary.json with the measured quantities behind each
/// interpretability method (stability std, completeness error, occlusion
/// sharpness, ICAA overlap, prototype agreement).
void assemble_report(const std::string& run_dir);

}  // namespace iqnncs
