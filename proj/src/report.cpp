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
#include "iqnncs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace iqnncs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string repr(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_metrics_json(const EvaluationReport& report,
                        const std::vector<std::string>& class_names,
                        const std::string& path) {
    json per_class = json::array();
    for (std::size_t c = 0; c < report.precision.size(); ++c) {
        per_class.push_back(
            {{"class", c < class_names.size() ? class_names[c]
                                              : "class_" + std::to_string(c)},
             {"precision", report.precision[c]},
             {"recall", report.recall[c]},
             {"f1", report.f1[c]}});
    }
    json confusion = json::array();
    for (std::size_t r = 0; r < report.confusion.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < report.confusion.cols; ++c)
            row.push_back(static_cast<std::size_t>(report.confusion(r, c)));
        confusion.push_back(row);
    }
    json j{{"accuracy", report.accuracy},
           {"macro_f1", report.macro_f1},
           {"n_test", report.n_test},
           {"classes", class_names},
           {"per_class", per_class},
           {"confusion", confusion}};
    open_out(path) << j.dump(2) << '\n';
}

EvaluationReport read_metrics_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    EvaluationReport r;
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.n_test = j.at("n_test").get<std::size_t>();
    const json& confusion = j.at("confusion");
    r.confusion = Matrix(confusion.size(), confusion.size());
    for (std::size_t a = 0; a < confusion.size(); ++a)
        for (std::size_t b = 0; b < confusion.at(a).size(); ++b)
            r.confusion(a, b) = confusion.at(a).at(b).get<double>();
    for (const auto& pc : j.at("per_class")) {
        r.precision.push_back(pc.at("precision").get<double>());
        r.recall.push_back(pc.at("recall").get<double>());
        r.f1.push_back(pc.at("f1").get<double>());
    }
    return r;
}

void write_history_csv(const TrainingHistory& history, const std::string& path) {
    auto out = open_out(path);
    out << "epoch,split,loss,acc\n";
    for (std::size_t e = 0; e < history.epochs_run(); ++e) {
        out << e << ",train," << repr(history.train_loss[e]) << ','
            << repr(history.train_acc[e]) << '\n';
        out << e << ",val," << repr(history.val_loss[e]) << ','
            << repr(history.val_acc[e]) << '\n';
        out << e << ",test," << repr(history.test_loss[e]) << ','
            << repr(history.test_acc[e]) << '\n';
    }
}

TrainingHistory read_history_csv(const std::string& path) {
    const auto rows = read_csv_rows(path);
    TrainingHistory h;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 4) throw std::runtime_error("history.csv: malformed row");
        const double loss = std::stod(r[2]);
        const double acc = std::stod(r[3]);
        if (r[1] == "train") {
            h.train_loss.push_back(loss);
            h.train_acc.push_back(acc);
        } else if (r[1] == "val") {
            h.val_loss.push_back(loss);
            h.val_acc.push_back(acc);
        } else if (r[1] == "test") {
            h.test_loss.push_back(loss);
            h.test_acc.push_back(acc);
        }
    }
    return h;
}

void write_confusion_csv(const EvaluationReport& report,
                         const std::vector<std::string>& class_names,
                         const std::string& path) {
    auto out = open_out(path);
    auto name = [&class_names](std::size_t c) {
        return c < class_names.size() ? class_names[c]
                                      : "class_" + std::to_string(c);
    };
    out << "true\\predicted";
    for (std::size_t c = 0; c < report.confusion.cols; ++c) out << ',' << name(c);
    out << '\n';
    for (std::size_t r = 0; r < report.confusion.rows; ++r) {
        out << name(r);
        for (std::size_t c = 0; c < report.confusion.cols; ++c)
            out << ',' << static_cast<std::size_t>(report.confusion(r, c));
        out << '\n';
    }
}

void write_attribution_csv(const AttributionVector& attribution,
                           const std::vector<std::string>& feature_names,
                           const std::string& path) {
    auto out = open_out(path);
    out << "feature,score\n";
    for (std::size_t j = 0; j < attribution.scores.size(); ++j) {
        const std::string fname = j < feature_names.size()
                                      ? feature_names[j]
                                      : "f" + std::to_string(j);
        out << fname << ',' << repr(attribution.scores[j]) << '\n';
    }
}

void write_icaa_json(const IcaaMatrix& matrix, std::size_t instance_id,
                     const std::vector<std::string>& class_names,
                     const std::string& path) {
    json rows = json::array();
    for (std::size_t r = 0; r < matrix.values.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < matrix.values.cols; ++c) {
            const double v = matrix.values(r, c);
            if (std::isnan(v)) row.push_back(nullptr);
            else row.push_back(v);
        }
        rows.push_back(row);
    }
    json undefined = json::array();
    for (std::size_t c = 0; c < matrix.defined.size(); ++c)
        if (!matrix.defined[c]) undefined.push_back(c);
    json j{{"instance", instance_id},
           {"classes", class_names},
           {"matrix", rows},
           {"undefined_classes", undefined}};
    open_out(path) << j.dump(2) << '\n';
}

IcaaMatrix read_icaa_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    const json& rows = j.at("matrix");
    IcaaMatrix m;
    m.values = Matrix(rows.size(), rows.size());
    m.defined.assign(rows.size(), 1);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.at(r).size(); ++c) {
            const json& v = rows.at(r).at(c);
            m.values(r, c) = v.is_null()
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : v.get<double>();
        }
    for (const auto& u : j.at("undefined_classes"))
        m.defined[u.get<std::size_t>()] = 0;
    return m;
}

void write_occlusion_csv(const OcclusionCurve& curve, const std::string& path) {
    auto out = open_out(path);
    out << "k,occluded_feature,probability\n";
    out << "0,," << repr(curve.probabilities[0]) << '\n';
    for (std::size_t k = 1; k < curve.probabilities.size(); ++k)
        out << k << ',' << curve.ranking[k - 1] << ','
            << repr(curve.probabilities[k]) << '\n';
}

OcclusionCurve read_occlusion_csv(const std::string& path) {
    const auto rows = read_csv_rows(path);
    OcclusionCurve curve;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 3) throw std::runtime_error("occlusion csv: malformed row");
        if (i > 1) curve.ranking.push_back(std::stoul(r[1]));
        curve.probabilities.push_back(std::stod(r[2]));
    }
    return curve;
}

void write_indecision_csv(const IndecisionReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "sample,saliency_std,threshold,indecisive\n";
    for (std::size_t i = 0; i < report.sample_ids.size(); ++i)
        out << report.sample_ids[i] << ',' << repr(report.saliency_std[i]) << ','
            << repr(report.threshold) << ','
            << (report.indecisive[i] ? "yes" : "no") << '\n';
}

IndecisionReport read_indecision_csv(const std::string& path) {
    const auto rows = read_csv_rows(path);
    IndecisionReport report;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 4) throw std::runtime_error("indecision csv: malformed row");
        report.sample_ids.push_back(std::stoul(r[0]));
        report.saliency_std.push_back(std::stod(r[1]));
        report.threshold = std::stod(r[2]);
        report.indecisive.push_back(r[3] == "yes" ? 1 : 0);
    }
    return report;
}

void write_entropy_csv(const EntropyStats& stats, const std::string& path) {
    auto out = open_out(path);
    out << "sample,entropy\n";
    for (std::size_t i = 0; i < stats.entropy.size(); ++i)
        out << i << ',' << repr(stats.entropy[i]) << '\n';
}

void write_entropy_histogram_csv(const EntropyStats& stats,
                                 const std::string& path) {
    auto out = open_out(path);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < stats.counts.size(); ++b)
        out << repr(stats.bin_edges[b]) << ',' << repr(stats.bin_edges[b + 1])
            << ',' << stats.counts[b] << '\n';
}

void write_embedding_csv(const Embedding2D& embedding, const std::string& path) {
    auto out = open_out(path);
    out << "sample,x,y,label\n";
    for (std::size_t i = 0; i < embedding.coords.rows; ++i) {
        out << i << ',' << repr(embedding.coords(i, 0)) << ','
            << repr(embedding.coords(i, 1)) << ',';
        out << (i < embedding.labels.size() ? embedding.labels[i] : 0) << '\n';
    }
}

Embedding2D read_embedding_csv(const std::string& path) {
    const auto rows = read_csv_rows(path);
    Embedding2D e;
    const std::size_t n = rows.size() > 1 ? rows.size() - 1 : 0;
    e.coords = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i + 1];
        if (r.size() != 4) throw std::runtime_error("embedding csv: malformed row");
        e.coords(i, 0) = std::stod(r[1]);
        e.coords(i, 1) = std::stod(r[2]);
        e.labels.push_back(std::stoul(r[3]));
    }
    return e;
}

void write_prototypes_csv(const std::vector<PrototypeMatch>& matches,
                          const std::string& path) {
    auto out = open_out(path);
    out << "rank,train_index,label,cosine_similarity,same_class\n";
    for (std::size_t i = 0; i < matches.size(); ++i)
        out << (i + 1) << ',' << matches[i].train_index << ',' << matches[i].label
            << ',' << repr(matches[i].similarity) << ','
            << (matches[i].same_class ? "same" : "different") << '\n';
}

std::string heat_color(double value, double vmin, double vmax) {
    double t = 0.0;
    if (vmax > vmin) t = (value - vmin) / (vmax - vmin);
    if (std::isnan(value)) t = 0.0;  // undefined cells render as white
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 - t * 222.0));
    const int g = static_cast<int>(std::lround(255.0 - t * 155.0));
    const int b = static_cast<int>(std::lround(255.0 - t * 94.0));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 90;
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 60;
constexpr int kMarginRight = 110;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string svg_open(const std::string& title) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\">\n";
    s << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
    return s.str();
}

struct AxisScale {
    double lo, hi;
    double to_px(double v, double px_lo, double px_hi) const {
        const double t = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
        return px_lo + t * (px_hi - px_lo);
    }
};

AxisScale nice_scale(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string svg_heatmap(const Matrix& values,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const std::string& title, double vmin, double vmax) {
    const std::size_t nr = values.rows;
    const std::size_t nc = values.cols;
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const double cell_w = plot_w / static_cast<double>(std::max<std::size_t>(nc, 1));
    const double cell_h = plot_h / static_cast<double>(std::max<std::size_t>(nr, 1));

    std::ostringstream s;
    s << svg_open(title);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double x = kMarginLeft + c * cell_w;
            const double y = kMarginTop + r * cell_h;
            const double v = values(r, c);
            s << "<rect x=\"" << fixed2(x) << "\" y=\"" << fixed2(y)
              << "\" width=\"" << fixed2(cell_w) << "\" height=\"" << fixed2(cell_h)
              << "\" fill=\"" << heat_color(v, vmin, vmax)
              << "\" stroke=\"#cccccc\"/>\n";
            s << "<text x=\"" << fixed2(x + cell_w / 2) << "\" y=\""
              << fixed2(y + cell_h / 2 + 4)
              << "\" text-anchor=\"middle\" font-size=\"11\">"
              << (std::isnan(v) ? std::string("n/a") : fixed2(v)) << "</text>\n";
        }
    }
    for (std::size_t r = 0; r < nr && r < row_labels.size(); ++r)
        s << "<text x=\"" << (kMarginLeft - 6) << "\" y=\""
          << fixed2(kMarginTop + r * cell_h + cell_h / 2 + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">" << xml_escape(row_labels[r])
          << "</text>\n";
    for (std::size_t c = 0; c < nc && c < col_labels.size(); ++c)
        s << "<text x=\"" << fixed2(kMarginLeft + c * cell_w + cell_w / 2)
          << "\" y=\"" << (kMarginTop - 8)
          << "\" text-anchor=\"middle\" font-size=\"11\">"
          << xml_escape(col_labels[c]) << "</text>\n";

    // Color legend: a vertical ramp with min/max annotations.
    const double lx = kWidth - kMarginRight + 30;
    const int steps = 64;
    const double lh = plot_h / steps;
    for (int i = 0; i < steps; ++i) {
        const double frac = 1.0 - (static_cast<double>(i) + 0.5) / steps;
        const double v = vmin + frac * (vmax - vmin);
        s << "<rect x=\"" << fixed2(lx) << "\" y=\"" << fixed2(kMarginTop + i * lh)
          << "\" width=\"16\" height=\"" << fixed2(lh + 0.5) << "\" fill=\""
          << heat_color(v, vmin, vmax) << "\"/>\n";
    }
    s << "<text x=\"" << fixed2(lx + 20) << "\" y=\"" << (kMarginTop + 10)
      << "\" font-size=\"11\">" << fixed2(vmax) << "</text>\n";
    s << "<text x=\"" << fixed2(lx + 20) << "\" y=\""
      << fixed2(kMarginTop + plot_h) << "\" font-size=\"11\">" << fixed2(vmin)
      << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string svg_line_chart(const std::vector<LineSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t max_n = 0;
    for (const auto& sr : series) {
        max_n = std::max(max_n, sr.ys.size());
        for (double v : sr.ys) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (max_n == 0) {
        lo = 0.0;
        hi = 1.0;
    }
    const AxisScale yscale = nice_scale(lo, hi);
    const double x0 = kMarginLeft;
    const double x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom;
    const double y1 = kMarginTop;

    std::ostringstream s;
    s << svg_open(title);
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\""
      << y0 << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\""
      << y1 << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = yscale.lo + (yscale.hi - yscale.lo) * t / 4.0;
        const double py = yscale.to_px(v, y0, y1);
        s << "<line x1=\"" << (x0 - 4) << "\" y1=\"" << fixed2(py) << "\" x2=\""
          << x0 << "\" y2=\"" << fixed2(py) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << (x0 - 8) << "\" y=\"" << fixed2(py + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">" << fixed2(v) << "</text>\n";
    }
    s << "<text x=\"" << (x0 + (x1 - x0) / 2) << "\" y=\"" << (kHeight - 16)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label)
      << "</text>\n";
    s << "<text x=\"20\" y=\"" << (y1 + (y0 - y1) / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 20 "
      << (y1 + (y0 - y1) / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& sr = series[si];
        if (sr.ys.empty()) continue;
        const char* color = kPalette[si % 8];
        std::ostringstream pts;
        for (std::size_t i = 0; i < sr.ys.size(); ++i) {
            const double px = (sr.ys.size() > 1)
                                  ? x0 + (x1 - x0) * static_cast<double>(i) /
                                        static_cast<double>(sr.ys.size() - 1)
                                  : (x0 + x1) / 2;
            pts << fixed2(px) << ',' << fixed2(yscale.to_px(sr.ys[i], y0, y1)) << ' ';
        }
        s << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1.5\"/>\n";
        const double ly = kMarginTop + 16.0 * static_cast<double>(si);
        s << "<rect x=\"" << (x1 + 8) << "\" y=\"" << fixed2(ly) << "\" width=\"12\""
          << " height=\"3\" fill=\"" << color << "\"/>\n";
        s << "<text x=\"" << (x1 + 24) << "\" y=\"" << fixed2(ly + 5)
          << "\" font-size=\"11\">" << xml_escape(sr.name) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string svg_scatter(const Embedding2D& embedding, const std::string& title) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (std::size_t i = 0; i < embedding.coords.rows; ++i) {
        xlo = std::min(xlo, embedding.coords(i, 0));
        xhi = std::max(xhi, embedding.coords(i, 0));
        ylo = std::min(ylo, embedding.coords(i, 1));
        yhi = std::max(yhi, embedding.coords(i, 1));
    }
    if (embedding.coords.rows == 0) {
        xlo = ylo = 0.0;
        xhi = yhi = 1.0;
    }
    const AxisScale xs = nice_scale(xlo, xhi);
    const AxisScale ys = nice_scale(ylo, yhi);
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;

    std::ostringstream s;
    s << svg_open(title);
    s << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << (x1 - x0)
      << "\" height=\"" << (y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    std::map<std::size_t, bool> seen;
    for (std::size_t i = 0; i < embedding.coords.rows; ++i) {
        const std::size_t label =
            i < embedding.labels.size() ? embedding.labels[i] : 0;
        seen[label] = true;
        s << "<circle cx=\"" << fixed2(xs.to_px(embedding.coords(i, 0), x0, x1))
          << "\" cy=\"" << fixed2(ys.to_px(embedding.coords(i, 1), y0, y1))
          << "\" r=\"3\" fill=\"" << kPalette[label % 8] << "\" fill-opacity=\"0.7\"/>\n";
    }
    std::size_t li = 0;
    for (const auto& [label, _] : seen) {
        const double ly = kMarginTop + 16.0 * static_cast<double>(li++);
        s << "<circle cx=\"" << (x1 + 14) << "\" cy=\"" << fixed2(ly) << "\" r=\"4\""
          << " fill=\"" << kPalette[label % 8] << "\"/>\n";
        s << "<text x=\"" << (x1 + 24) << "\" y=\"" << fixed2(ly + 4)
          << "\" font-size=\"11\">class " << label << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string svg_histogram(const std::vector<double>& bin_edges,
                          const std::vector<std::size_t>& counts,
                          const std::string& title, const std::string& x_label) {
    std::size_t max_count = 1;
    for (std::size_t c : counts) max_count = std::max(max_count, c);
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    const double bw = (x1 - x0) / static_cast<double>(std::max<std::size_t>(counts.size(), 1));

    std::ostringstream s;
    s << svg_open(title);
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\""
      << y0 << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\""
      << y1 << "\" stroke=\"black\"/>\n";
    for (std::size_t b = 0; b < counts.size(); ++b) {
        const double h = (y0 - y1) * static_cast<double>(counts[b]) /
                         static_cast<double>(max_count);
        s << "<rect x=\"" << fixed2(x0 + b * bw) << "\" y=\"" << fixed2(y0 - h)
          << "\" width=\"" << fixed2(bw - 1) << "\" height=\"" << fixed2(h)
          << "\" fill=\"#1f77b4\"/>\n";
    }
    if (!bin_edges.empty()) {
        s << "<text x=\"" << x0 << "\" y=\"" << (y0 + 16)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << fixed2(bin_edges.front())
          << "</text>\n";
        s << "<text x=\"" << x1 << "\" y=\"" << (y0 + 16)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << fixed2(bin_edges.back())
          << "</text>\n";
    }
    s << "<text x=\"" << (x0 + (x1 - x0) / 2) << "\" y=\"" << (kHeight - 16)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label)
      << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    open_out(path) << text;
}

std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

}  // namespace

void emit_report(const ReportBundle& bundle, const std::string& outdir) {
    fs::create_directories(outdir);
    const auto path = [&outdir](const std::string& name) {
        return (fs::path(outdir) / name).string();
    };

    if (bundle.metrics) {
        write_metrics_json(*bundle.metrics, bundle.class_names, path("metrics.json"));
        write_confusion_csv(*bundle.metrics, bundle.class_names,
                            path("confusion.csv"));
        double vmax = 1.0;
        for (double v : bundle.metrics->confusion.data) vmax = std::max(vmax, v);
        write_text(path("confusion.svg"),
                   svg_heatmap(bundle.metrics->confusion, bundle.class_names,
                               bundle.class_names, "Confusion matrix", 0.0, vmax));
    }
    if (bundle.history) {
        write_history_csv(*bundle.history, path("history.csv"));
        write_text(path("history_loss.svg"),
                   svg_line_chart({{"train", bundle.history->train_loss},
                                   {"val", bundle.history->val_loss},
                                   {"test", bundle.history->test_loss}},
                                  "Loss per epoch", "epoch", "loss"));
        write_text(path("history_accuracy.svg"),
                   svg_line_chart({{"train", bundle.history->train_acc},
                                   {"val", bundle.history->val_acc},
                                   {"test", bundle.history->test_acc}},
                                  "Accuracy per epoch", "epoch", "accuracy"));
    }
    for (const auto& a : bundle.attributions) {
        write_attribution_csv(a, bundle.feature_names,
                              path("attributions_" + std::to_string(a.instance_id) +
                                   "_" + a.method + ".csv"));
    }
    for (const auto& [id, m] : bundle.icaa_matrices) {
        write_icaa_json(m, id, bundle.class_names,
                        path("icaa_" + std::to_string(id) + ".json"));
        write_text(path("icaa_" + std::to_string(id) + ".svg"),
                   svg_heatmap(m.values, bundle.class_names, bundle.class_names,
                               "ICAA, instance " + std::to_string(id), -1.0, 1.0));
    }
    for (const auto& [id, curve] : bundle.occlusions) {
        write_occlusion_csv(curve, path("occlusion_" + std::to_string(id) + ".csv"));
        write_text(path("occlusion_" + std::to_string(id) + ".svg"),
                   svg_line_chart({{"p(predicted)", curve.probabilities}},
                                  "Occlusion curve, instance " + std::to_string(id),
                                  "features occluded", "probability"));
    }
    for (const auto& [id, matches] : bundle.prototypes)
        write_prototypes_csv(matches,
                             path("prototypes_" + std::to_string(id) + ".csv"));
    if (bundle.indecision)
        write_indecision_csv(*bundle.indecision, path("indecision.csv"));
    if (bundle.entropy) {
        write_entropy_csv(*bundle.entropy, path("entropy.csv"));
        write_entropy_histogram_csv(*bundle.entropy,
                                    path("entropy_histogram.csv"));
        write_text(path("entropy.svg"),
                   svg_histogram(bundle.entropy->bin_edges, bundle.entropy->counts,
                                 "Softmax entropy", "entropy (nats)"));
    }
    if (bundle.embedding) {
        write_embedding_csv(*bundle.embedding, path("embedding.csv"));
        write_text(path("embedding.svg"),
                   svg_scatter(*bundle.embedding, "Quantum activations, t-SNE"));
    }
}

void assemble_report(const std::string& run_dir) {
    if (!fs::is_directory(run_dir))
        throw std::runtime_error("report: not a directory: " + run_dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(run_dir))
        if (entry.is_regular_file())
            files.push_back(entry.path().filename().string());
    std::sort(files.begin(), files.end());

    const auto path = [&run_dir](const std::string& name) {
        return (fs::path(run_dir) / name).string();
    };
    json summary;
    summary["methods"] = json::object();

    for (const auto& name : files) {
        if (name == "metrics.json") {
            const EvaluationReport r = read_metrics_json(path(name));
            double vmax = 1.0;
            for (double v : r.confusion.data) vmax = std::max(vmax, v);
            const auto labels = index_labels(r.confusion.rows);
            write_text(path("confusion.svg"),
                       svg_heatmap(r.confusion, labels, labels, "Confusion matrix",
                                   0.0, vmax));
            summary["metrics"] = {{"accuracy", r.accuracy},
                                  {"macro_f1", r.macro_f1}};
        } else if (name == "history.csv") {
            const TrainingHistory h = read_history_csv(path(name));
            write_text(path("history_loss.svg"),
                       svg_line_chart({{"train", h.train_loss},
                                       {"val", h.val_loss},
                                       {"test", h.test_loss}},
                                      "Loss per epoch", "epoch", "loss"));
            write_text(path("history_accuracy.svg"),
                       svg_line_chart({{"train", h.train_acc},
                                       {"val", h.val_acc},
                                       {"test", h.test_acc}},
                                      "Accuracy per epoch", "epoch", "accuracy"));
        } else if (name.rfind("icaa_", 0) == 0 && name.size() > 10 &&
                   name.substr(name.size() - 5) == ".json") {
            const IcaaMatrix m = read_icaa_json(path(name));
            const std::string id = name.substr(5, name.size() - 10);
            const auto labels = index_labels(m.values.rows);
            write_text(path("icaa_" + id + ".svg"),
                       svg_heatmap(m.values, labels, labels, "ICAA, instance " + id,
                                   -1.0, 1.0));
            double off = 0.0;
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < m.values.rows; ++i)
                for (std::size_t j = 0; j < m.values.cols; ++j)
                    if (i != j && !std::isnan(m.values(i, j))) {
                        off += std::abs(m.values(i, j));
                        ++cnt;
                    }
            summary["methods"]["icaa"]["mean_abs_off_diagonal_" + id] =
                cnt ? off / static_cast<double>(cnt) : 0.0;
        } else if (name.rfind("occlusion_", 0) == 0 &&
                   name.substr(name.size() - 4) == ".csv") {
            const OcclusionCurve curve = read_occlusion_csv(path(name));
            const std::string id = name.substr(10, name.size() - 14);
            write_text(path("occlusion_" + id + ".svg"),
                       svg_line_chart({{"p(predicted)", curve.probabilities}},
                                      "Occlusion curve, instance " + id,
                                      "features occluded", "probability"));
            double sharpest = 0.0;
            for (std::size_t k = 1; k < curve.probabilities.size(); ++k)
                sharpest = std::max(sharpest, curve.probabilities[k - 1] -
                                                  curve.probabilities[k]);
            summary["methods"]["occlusion"]["max_single_step_drop_" + id] = sharpest;
        } else if (name == "indecision.csv") {
            const IndecisionReport r = read_indecision_csv(path(name));
            double mean = 0.0, mx = 0.0;
            std::size_t flagged = 0;
            for (std::size_t i = 0; i < r.saliency_std.size(); ++i) {
                mean += r.saliency_std[i];
                mx = std::max(mx, r.saliency_std[i]);
                flagged += r.indecisive[i] ? 1 : 0;
            }
            if (!r.saliency_std.empty())
                mean /= static_cast<double>(r.saliency_std.size());
            summary["methods"]["indecision"] = {{"mean_saliency_std", mean},
                                                {"max_saliency_std", mx},
                                                {"threshold", r.threshold},
                                                {"n_flagged", flagged}};
        } else if (name.rfind("ig_completeness_", 0) == 0 &&
                   name.substr(name.size() - 5) == ".json") {
            std::ifstream in(path(name));
            json j;
            in >> j;
            const std::string id = name.substr(16, name.size() - 21);
            summary["methods"]["integrated_gradients"]["completeness_relative_error_" + id] =
                j.value("relative_error", 0.0);
        } else if (name.rfind("prototypes_", 0) == 0 &&
                   name.substr(name.size() - 4) == ".csv") {
            const auto rows = read_csv_rows(path(name));
            if (rows.size() > 1) {
                const std::string id = name.substr(11, name.size() - 15);
                summary["methods"]["example_based"]["top1_same_class_" + id] =
                    rows[1].size() == 5 && rows[1][4] == "same";
            }
        } else if (name == "embedding.csv") {
            const Embedding2D e = read_embedding_csv(path(name));
            write_text(path("embedding.svg"),
                       svg_scatter(e, "Quantum activations, t-SNE"));
        }
    }
    open_out(path("method_summary.json")) << summary.dump(2) << '\n';
}

}  // namespace iqnncs
