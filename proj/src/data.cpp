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
#include "iqnncs/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace iqnncs {

using nlohmann::json;

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(n_classes(), 0);
    for (std::size_t y : labels) {
        if (y >= counts.size()) counts.resize(y + 1, 0);
        ++counts[y];
    }
    return counts;
}

std::vector<double> Dataset::sample(std::size_t i) const {
    const double* r = features.row(i);
    return std::vector<double>(r, r + features.cols);
}

namespace {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line the record starts on
};

std::vector<CsvRecord> parse_csv(const std::string& text) {
    std::vector<CsvRecord> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool record_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        fields.push_back(field);
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back({std::move(fields), record_line});
        fields = {};
        record_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!record_started) {
            record_started = true;
            record_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            ++line;
            end_record();
        } else if (c == '\n') {
            ++line;
            end_record();
        } else {
            field += c;
        }
    }
    if (in_quotes) throw std::runtime_error("csv: unterminated quoted field");
    if (record_started) end_record();
    return records;
}

double parse_number(const std::string& s, const std::string& column,
                    std::size_t line) {
    if (s.empty())
        throw std::runtime_error("csv line " + std::to_string(line) +
                                 ": missing value in column '" + column + "'");
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    while (consumed < s.size() && std::isspace(static_cast<unsigned char>(s[consumed])))
        ++consumed;
    if (consumed != s.size() || !std::isfinite(value))
        throw std::runtime_error("csv line " + std::to_string(line) +
                                 ": cannot parse '" + s + "' in column '" + column +
                                 "' as a number");
    return value;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::runtime_error("csv: missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json split_to_json(const SplitIndices& s) {
    return json{{"train", s.train}, {"val", s.val}, {"test", s.test}};
}

SplitIndices split_from_json(const json& j) {
    SplitIndices s;
    s.train = j.at("train").get<std::vector<std::size_t>>();
    s.val = j.at("val").get<std::vector<std::size_t>>();
    s.test = j.at("test").get<std::vector<std::size_t>>();
    return s;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows; ++r)
        rows.push_back(std::vector<double>(m.row(r), m.row(r) + m.cols));
    return rows;
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    m.rows = j.size();
    m.cols = m.rows ? j.at(0).size() : 0;
    m.data.reserve(m.rows * m.cols);
    for (const auto& row : j) {
        if (row.size() != m.cols)
            throw std::runtime_error("matrix json: ragged rows");
        for (const auto& v : row) m.data.push_back(v.get<double>());
    }
    return m;
}

}  // namespace

ColumnSchema ColumnSchema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema file: " + path);
    json j;
    try {
        in >> j;
        ColumnSchema s;
        s.numeric = j.value("numeric", std::vector<std::string>{});
        s.categorical = j.value("categorical", std::vector<std::string>{});
        s.label = j.at("label").get<std::string>();
        s.classes = j.value("classes", std::vector<std::string>{});
        return s;
    } catch (const json::exception& e) {
        throw std::runtime_error("schema file " + path + ": " + e.what());
    }
}

void ColumnSchema::save(const std::string& path) const {
    json j{{"numeric", numeric},
           {"categorical", categorical},
           {"label", label}};
    if (!classes.empty()) j["classes"] = classes;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schema file: " + path);
    out << j.dump(2) << '\n';
}

Dataset load_csv(const std::string& path, const ColumnSchema& schema,
                 const std::vector<OneHotMap>* maps,
                 std::vector<OneHotMap>* fitted_maps) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto records = parse_csv(buf.str());
    if (records.empty()) throw std::runtime_error("csv: empty file: " + path);

    const auto& header = records.front().fields;
    std::vector<std::size_t> numeric_cols;
    for (const auto& name : schema.numeric)
        numeric_cols.push_back(find_column(header, name));
    std::vector<std::size_t> categorical_cols;
    for (const auto& name : schema.categorical)
        categorical_cols.push_back(find_column(header, name));
    const std::size_t label_col = find_column(header, schema.label);

    std::vector<CsvRecord> rows(records.begin() + 1, records.end());
    // Tolerate one trailing blank record.
    if (!rows.empty() && rows.back().fields.size() == 1 && rows.back().fields[0].empty())
        rows.pop_back();
    if (rows.empty()) throw std::runtime_error("csv: no data rows in " + path);

    for (const auto& r : rows)
        if (r.fields.size() != header.size())
            throw std::runtime_error("csv line " + std::to_string(r.line) +
                                     ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(r.fields.size()));

    // Category levels: applied from `maps` or fitted from this file (sorted).
    std::vector<OneHotMap> local_maps;
    if (maps) {
        if (maps->size() != schema.categorical.size())
            throw std::runtime_error("csv: one-hot map count does not match schema");
        local_maps = *maps;
    } else {
        for (std::size_t ci = 0; ci < categorical_cols.size(); ++ci) {
            std::set<std::string> levels;
            for (const auto& r : rows) {
                const auto& v = r.fields[categorical_cols[ci]];
                if (v.empty())
                    throw std::runtime_error("csv line " + std::to_string(r.line) +
                                             ": missing value in column '" +
                                             schema.categorical[ci] + "'");
                levels.insert(v);
            }
            local_maps.push_back({schema.categorical[ci],
                                  {levels.begin(), levels.end()}});
        }
    }
    if (fitted_maps) *fitted_maps = local_maps;

    // Class names: pinned by the schema, or sorted values found in the file.
    std::vector<std::string> class_names = schema.classes;
    if (class_names.empty()) {
        std::set<std::string> seen;
        for (const auto& r : rows) seen.insert(r.fields[label_col]);
        class_names.assign(seen.begin(), seen.end());
    }
    std::map<std::string, std::size_t> class_index;
    for (std::size_t c = 0; c < class_names.size(); ++c)
        class_index[class_names[c]] = c;

    Dataset out;
    out.class_names = class_names;
    out.feature_names = schema.numeric;
    for (std::size_t ci = 0; ci < local_maps.size(); ++ci)
        for (const auto& level : local_maps[ci].levels)
            out.feature_names.push_back(local_maps[ci].column + "=" + level);

    const std::size_t d = out.feature_names.size();
    out.features = Matrix(rows.size(), d);
    out.labels.resize(rows.size());

    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const auto& r = rows[ri];
        std::size_t fi = 0;
        for (std::size_t ni = 0; ni < numeric_cols.size(); ++ni)
            out.features(ri, fi++) =
                parse_number(r.fields[numeric_cols[ni]], schema.numeric[ni], r.line);
        for (std::size_t ci = 0; ci < categorical_cols.size(); ++ci) {
            const auto& v = r.fields[categorical_cols[ci]];
            const auto& levels = local_maps[ci].levels;
            auto it = std::find(levels.begin(), levels.end(), v);
            if (it == levels.end())
                throw std::runtime_error("csv line " + std::to_string(r.line) +
                                         ": unknown category '" + v + "' in column '" +
                                         local_maps[ci].column + "'");
            for (std::size_t li = 0; li < levels.size(); ++li)
                out.features(ri, fi++) = (levels.begin() + li == it) ? 1.0 : 0.0;
        }
        const auto& lv = r.fields[label_col];
        auto it = class_index.find(lv);
        if (it == class_index.end())
            throw std::runtime_error("csv line " + std::to_string(r.line) +
                                     ": unknown label value '" + lv + "'");
        out.labels[ri] = it->second;
    }
    return out;
}

void write_csv(const Dataset& data, const std::string& path,
               const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write csv file: " + path);
    for (std::size_t j = 0; j < data.feature_names.size(); ++j)
        out << csv_quote(data.feature_names[j]) << ',';
    out << csv_quote(label_column) << '\n';
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.dim(); ++j)
            out << format_double(data.features(i, j)) << ',';
        out << csv_quote(data.class_names.at(data.labels[i])) << '\n';
    }
}

Balancing balancing_from_string(const std::string& s) {
    if (s == "none") return Balancing::None;
    if (s == "undersample") return Balancing::Undersample;
    if (s == "smote") return Balancing::Smote;
    throw std::invalid_argument("unknown balancing strategy: " + s);
}

std::string to_string(Balancing b) {
    switch (b) {
        case Balancing::Undersample: return "undersample";
        case Balancing::Smote: return "smote";
        default: return "none";
    }
}

void FittedPreprocessor::save(const std::string& path) const {
    json maps = json::array();
    for (const auto& m : onehot_maps)
        maps.push_back({{"column", m.column}, {"levels", m.levels}});
    json j{{"format", "iqnncs_preprocessor"},
           {"version", 1},
           {"means", means},
           {"stds", stds},
           {"kept_features", kept_features},
           {"feature_names", feature_names},
           {"class_names", class_names},
           {"onehot_maps", maps},
           {"pca_components", matrix_to_json(pca_components)},
           {"pca_explained_variance", pca_explained_variance},
           {"balancing", to_string(balancing)},
           {"smote_k", smote_k},
           {"split", split_to_json(split)},
           {"seed", seed}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write preprocessor file: " + path);
    out << j.dump(2) << '\n';
}

FittedPreprocessor FittedPreprocessor::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open preprocessor file: " + path);
    json j;
    try {
        in >> j;
        if (j.value("format", "") != "iqnncs_preprocessor" || j.value("version", 0) != 1)
            throw std::runtime_error("not a version-1 iqnncs preprocessor file");
        FittedPreprocessor p;
        p.means = j.at("means").get<std::vector<double>>();
        p.stds = j.at("stds").get<std::vector<double>>();
        p.kept_features = j.at("kept_features").get<std::vector<std::size_t>>();
        p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        p.class_names = j.at("class_names").get<std::vector<std::string>>();
        for (const auto& m : j.at("onehot_maps"))
            p.onehot_maps.push_back({m.at("column").get<std::string>(),
                                     m.at("levels").get<std::vector<std::string>>()});
        p.pca_components = matrix_from_json(j.at("pca_components"));
        p.pca_explained_variance =
            j.at("pca_explained_variance").get<std::vector<double>>();
        p.balancing = balancing_from_string(j.at("balancing").get<std::string>());
        p.smote_k = j.at("smote_k").get<std::size_t>();
        p.split = split_from_json(j.at("split"));
        p.seed = j.at("seed").get<std::uint64_t>();
        return p;
    } catch (const json::exception& e) {
        throw std::runtime_error("preprocessor file " + path + ": " + e.what());
    }
}

std::string FittedPreprocessor::content_hash() const {
    json maps = json::array();
    for (const auto& m : onehot_maps)
        maps.push_back({{"column", m.column}, {"levels", m.levels}});
    const std::string s = json{{"means", means},
                               {"stds", stds},
                               {"kept", kept_features},
                               {"maps", maps},
                               {"pca", matrix_to_json(pca_components)},
                               {"balancing", to_string(balancing)},
                               {"seed", seed}}
                              .dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FittedPreprocessor fit_standardize(const Dataset& train) {
    if (train.n() < 2)
        throw std::invalid_argument("fit_standardize: need at least two samples");
    FittedPreprocessor prep;
    const std::size_t n = train.n();
    for (std::size_t j = 0; j < train.dim(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += train.features(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = train.features(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
            std::cerr << "warning: dropping constant feature '"
                      << train.feature_names[j] << "'\n";
            continue;
        }
        prep.kept_features.push_back(j);
        prep.feature_names.push_back(train.feature_names[j]);
        prep.means.push_back(mean);
        prep.stds.push_back(sd);
    }
    if (prep.kept_features.empty())
        throw std::runtime_error("fit_standardize: all features are constant");
    return prep;
}

Dataset apply_standardize(const FittedPreprocessor& prep, const Dataset& data) {
    Dataset out;
    out.labels = data.labels;
    out.class_names = data.class_names;
    out.feature_names = prep.feature_names;
    out.features = Matrix(data.n(), prep.kept_features.size());
    for (std::size_t i = 0; i < data.n(); ++i)
        for (std::size_t j = 0; j < prep.kept_features.size(); ++j)
            out.features(i, j) =
                (data.features(i, prep.kept_features[j]) - prep.means[j]) /
                prep.stds[j];
    return out;
}

void fit_pca(FittedPreprocessor& prep, const Dataset& standardized_train,
             std::size_t d_pca) {
    const std::size_t d = standardized_train.dim();
    if (d_pca == 0 || d_pca > d)
        throw std::invalid_argument("fit_pca: component count must be in [1, d]");
    const std::size_t n = standardized_train.n();

    Matrix cov(d, d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += standardized_train.features(i, a) *
                       standardized_train.features(i, b);
            acc /= static_cast<double>(n);
            cov(a, b) = acc;
            cov(b, a) = acc;
        }
    }

    const EigenResult eig = sym_eigen(cov);
    prep.pca_components = Matrix(d_pca, d);
    prep.pca_explained_variance.assign(eig.eigenvalues.begin(),
                                       eig.eigenvalues.begin() + d_pca);
    for (std::size_t k = 0; k < d_pca; ++k) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double v = std::abs(eig.eigenvectors(j, k));
            if (v > best) {
                best = v;
                arg = j;
            }
        }
        const double sign = eig.eigenvectors(arg, k) < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < d; ++j)
            prep.pca_components(k, j) = sign * eig.eigenvectors(j, k);
    }
}

Dataset apply_pca(const FittedPreprocessor& prep, const Dataset& standardized) {
    if (!prep.has_pca())
        throw std::runtime_error("apply_pca: preprocessor has no fitted PCA");
    if (standardized.dim() != prep.pca_components.cols)
        throw std::invalid_argument("apply_pca: feature width mismatch");
    Dataset out;
    out.labels = standardized.labels;
    out.class_names = standardized.class_names;
    const std::size_t k = prep.pca_components.rows;
    for (std::size_t c = 0; c < k; ++c)
        out.feature_names.push_back("z" + std::to_string(c));
    out.features = Matrix(standardized.n(), k);
    for (std::size_t i = 0; i < standardized.n(); ++i) {
        const auto x = standardized.sample(i);
        const auto z = matvec(prep.pca_components, x);
        for (std::size_t c = 0; c < k; ++c) out.features(i, c) = z[c];
    }
    return out;
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& data) {
    std::vector<std::vector<std::size_t>> by_class(data.n_classes());
    for (std::size_t i = 0; i < data.n(); ++i) {
        if (data.labels[i] >= by_class.size())
            throw std::invalid_argument("labels exceed class count");
        by_class[data.labels[i]].push_back(i);
    }
    return by_class;
}

}  // namespace

Dataset undersample(const Dataset& data, SeededRng& rng) {
    const auto by_class = rows_by_class(data);
    std::size_t min_count = data.n();
    for (const auto& rows : by_class) {
        if (rows.empty())
            throw std::invalid_argument("undersample: empty class");
        min_count = std::min(min_count, rows.size());
    }
    std::vector<std::size_t> keep;
    for (const auto& rows : by_class) {
        std::vector<std::size_t> pool = rows;
        shuffle(pool, rng);
        keep.insert(keep.end(), pool.begin(), pool.begin() + min_count);
    }
    std::sort(keep.begin(), keep.end());
    return select_rows(data, keep);
}

Dataset smote(const Dataset& data, std::size_t k, SeededRng& rng) {
    if (k == 0) throw std::invalid_argument("smote: k must be positive");
    const auto by_class = rows_by_class(data);
    std::size_t max_count = 0;
    for (const auto& rows : by_class) max_count = std::max(max_count, rows.size());

    Dataset out = data;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const auto& rows = by_class[c];
        if (rows.size() >= max_count) continue;
        if (rows.size() < 2)
            throw std::invalid_argument(
                "smote: class '" + data.class_names.at(c) +
                "' has fewer than two samples");
        const std::size_t k_eff = std::min(k, rows.size() - 1);

        // k nearest same-class neighbors per point; ties break on row index.
        std::vector<std::vector<std::size_t>> neighbors(rows.size());
        for (std::size_t a = 0; a < rows.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> dist;
            for (std::size_t b = 0; b < rows.size(); ++b) {
                if (a == b) continue;
                double d2 = 0.0;
                for (std::size_t j = 0; j < data.dim(); ++j) {
                    const double diff = data.features(rows[a], j) -
                                        data.features(rows[b], j);
                    d2 += diff * diff;
                }
                dist.emplace_back(d2, rows[b]);
            }
            std::stable_sort(dist.begin(), dist.end());
            for (std::size_t t = 0; t < k_eff; ++t)
                neighbors[a].push_back(dist[t].second);
        }

        for (std::size_t extra = max_count - rows.size(); extra > 0; --extra) {
            const std::size_t a = static_cast<std::size_t>(rng.uniform_below(rows.size()));
            const std::size_t nn =
                neighbors[a][static_cast<std::size_t>(rng.uniform_below(k_eff))];
            const double u = rng.uniform();
            std::vector<double> synth(data.dim());
            for (std::size_t j = 0; j < data.dim(); ++j) {
                const double base = data.features(rows[a], j);
                synth[j] = base + u * (data.features(nn, j) - base);
            }
            out.features.rows += 1;
            out.features.data.insert(out.features.data.end(), synth.begin(),
                                     synth.end());
            out.labels.push_back(c);
        }
    }
    return out;
}

SplitIndices stratified_split(const Dataset& data, double f_train, double f_val,
                              double f_test, SeededRng& rng) {
    if (std::abs(f_train + f_val + f_test - 1.0) > 1e-9)
        throw std::invalid_argument("stratified_split: fractions must sum to 1");
    const auto by_class = rows_by_class(data);
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (by_class[c].size() < 3)
            throw std::invalid_argument("stratified_split: class '" +
                                        data.class_names.at(c) +
                                        "' has fewer than three samples");

    SplitIndices out;
    const double fracs[3] = {f_train, f_val, f_test};
    for (const auto& rows : by_class) {
        std::vector<std::size_t> pool = rows;
        shuffle(pool, rng);
        const double n = static_cast<double>(pool.size());
        std::size_t counts[3];
        double remainders[3];
        std::size_t assigned = 0;
        for (int s = 0; s < 3; ++s) {
            const double quota = fracs[s] * n;
            counts[s] = static_cast<std::size_t>(std::floor(quota));
            remainders[s] = quota - std::floor(quota);
            assigned += counts[s];
        }
        // Largest-remainder rounding; ties resolve in train, val, test order.
        while (assigned < pool.size()) {
            int best = 0;
            for (int s = 1; s < 3; ++s)
                if (remainders[s] > remainders[best]) best = s;
            counts[best] += 1;
            remainders[best] = -1.0;
            ++assigned;
        }
        std::size_t pos = 0;
        for (std::size_t i = 0; i < counts[0]; ++i) out.train.push_back(pool[pos++]);
        for (std::size_t i = 0; i < counts[1]; ++i) out.val.push_back(pool[pos++]);
        for (std::size_t i = 0; i < counts[2]; ++i) out.test.push_back(pool[pos++]);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

Dataset select_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.feature_names = data.feature_names;
    out.class_names = data.class_names;
    out.features = Matrix(rows.size(), data.dim());
    out.labels.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= data.n())
            throw std::out_of_range("select_rows: row index out of range");
        for (std::size_t j = 0; j < data.dim(); ++j)
            out.features(i, j) = data.features(rows[i], j);
        out.labels[i] = data.labels[rows[i]];
    }
    return out;
}

Dataset synth_blobs(std::size_t n_per_class, std::size_t n_classes,
                    std::size_t dim, double separation, SeededRng& rng) {
    if (n_per_class == 0 || n_classes == 0 || dim == 0)
        throw std::invalid_argument("synth_blobs: counts must be positive");
    Dataset out;
    for (std::size_t j = 0; j < dim; ++j)
        out.feature_names.push_back("f" + std::to_string(j));
    for (std::size_t c = 0; c < n_classes; ++c)
        out.class_names.push_back("class_" + std::to_string(c));

    std::vector<std::vector<double>> means;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<double> mu(dim, 0.0);
        if (c < dim) {
            mu[c] = separation;
        } else {
            double norm = 0.0;
            for (auto& v : mu) {
                v = rng.gaussian();
                norm += v * v;
            }
            norm = std::sqrt(std::max(norm, 1e-12));
            for (auto& v : mu) v = separation * v / norm;
        }
        means.push_back(std::move(mu));
    }

    out.features = Matrix(n_per_class * n_classes, dim);
    out.labels.resize(n_per_class * n_classes);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < n_per_class; ++i, ++row) {
            for (std::size_t j = 0; j < dim; ++j)
                out.features(row, j) = means[c][j] + rng.gaussian();
            out.labels[row] = c;
        }
    }
    return out;
}

}  // namespace iqnncs
