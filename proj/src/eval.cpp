#include "harkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "harkit/csv.hpp"
#include "harkit/error.hpp"

namespace harkit::eval {

namespace {

constexpr char kReportVersionLine[] = "# harkit-report-v1";

dataset::FeatureDataset subset(const dataset::FeatureDataset& ds,
                               std::span<const std::size_t> indices) {
    dataset::FeatureDataset out;
    out.schema = ds.schema;
    out.class_names = ds.class_names;
    out.rows.reserve(indices.size());
    for (std::size_t i : indices) out.rows.push_back(ds.rows[i]);
    return out;
}

}  // namespace

MetricsReport metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion,
                                     const std::vector<std::string>& classes,
                                     std::span<const double> abs_prob_errors) {
    const std::size_t n = confusion.size();
    if (n != classes.size()) throw DataError("confusion matrix does not match class list");
    for (const auto& row : confusion) {
        if (row.size() != n) throw DataError("confusion matrix must be square");
    }

    MetricsReport report;
    report.classes = classes;
    report.confusion = confusion;

    std::vector<std::size_t> actual(n, 0);     // row sums: support
    std::vector<std::size_t> predicted(n, 0);  // column sums
    std::size_t correct = 0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t p = 0; p < n; ++p) {
            actual[a] += confusion[a][p];
            predicted[p] += confusion[a][p];
            report.total += confusion[a][p];
        }
        correct += confusion[a][a];
    }
    report.accuracy =
        report.total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(report.total);

    report.precision.resize(n);
    report.recall.resize(n);
    report.f1.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        const double tp = static_cast<double>(confusion[c][c]);
        report.precision[c] =
            predicted[c] == 0 ? 0.0 : tp / static_cast<double>(predicted[c]);
        report.recall[c] = actual[c] == 0 ? 0.0 : tp / static_cast<double>(actual[c]);
        const double pr = report.precision[c] + report.recall[c];
        report.f1[c] = pr == 0.0 ? 0.0 : 2.0 * report.precision[c] * report.recall[c] / pr;
    }
    if (report.total > 0) {
        for (std::size_t c = 0; c < n; ++c) {
            const double w = static_cast<double>(actual[c]) / static_cast<double>(report.total);
            report.weighted_precision += w * report.precision[c];
            report.weighted_recall += w * report.recall[c];
            report.weighted_f1 += w * report.f1[c];
        }
    }

    if (!abs_prob_errors.empty()) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (double e : abs_prob_errors) {
            sum += e;
            sum_sq += e * e;
        }
        const double m = static_cast<double>(abs_prob_errors.size());
        report.mae = sum / m;
        report.rmse = std::sqrt(sum_sq / m);
    }
    return report;
}

MetricsReport cross_validate_with_folds(const models::ModelConfig& config,
                                        const dataset::FeatureDataset& ds,
                                        const std::vector<std::vector<std::size_t>>& folds) {
    const std::size_t n_classes = ds.class_names.size();
    std::vector<std::vector<std::size_t>> confusion(n_classes,
                                                    std::vector<std::size_t>(n_classes, 0));
    std::vector<double> prob_errors;
    prob_errors.reserve(ds.rows.size() * n_classes);

    for (std::size_t held_out = 0; held_out < folds.size(); ++held_out) {
        std::vector<std::size_t> train_indices;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            if (f == held_out) continue;
            train_indices.insert(train_indices.end(), folds[f].begin(), folds[f].end());
        }
        std::sort(train_indices.begin(), train_indices.end());

        const dataset::FeatureDataset train_ds = subset(ds, train_indices);
        const std::unique_ptr<models::TrainedModel> model = models::train(config, train_ds);

        for (std::size_t i : folds[held_out]) {
            const dataset::Row& row = ds.rows[i];
            const models::Prediction pred = model->predict(row.values);
            confusion[static_cast<std::size_t>(row.label)]
                     [static_cast<std::size_t>(pred.label)]++;
            for (std::size_t c = 0; c < n_classes; ++c) {
                const double y = c == static_cast<std::size_t>(row.label) ? 1.0 : 0.0;
                prob_errors.push_back(std::abs(pred.probabilities[c] - y));
            }
        }
    }
    return metrics_from_confusion(confusion, ds.class_names, prob_errors);
}

MetricsReport cross_validate(const models::ModelConfig& config,
                             const dataset::FeatureDataset& ds, int k, std::uint64_t seed) {
    return cross_validate_with_folds(config, ds, dataset::stratified_folds(ds, k, seed));
}

RankedFeatures info_gain_rank(const dataset::FeatureDataset& ds, int bins) {
    if (ds.rows.empty()) throw DataError("info_gain_rank: empty dataset");
    if (bins < 2) throw ConfigError("info_gain_rank: bins must be >= 2");

    const std::size_t n_rows = ds.rows.size();
    const std::size_t n_classes = ds.class_names.size();

    std::vector<std::size_t> class_counts(n_classes, 0);
    for (const dataset::Row& row : ds.rows) {
        class_counts[static_cast<std::size_t>(row.label)]++;
    }
    const auto entropy = [](std::span<const std::size_t> counts, std::size_t total) {
        double h = 0.0;
        for (std::size_t c : counts) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / static_cast<double>(total);
            h -= p * std::log2(p);
        }
        return h;
    };
    const double class_entropy = entropy(class_counts, n_rows);

    RankedFeatures ranked;
    ranked.entries.reserve(ds.schema.size());
    for (std::size_t f = 0; f < ds.schema.size(); ++f) {
        double lo = ds.rows[0].values[f];
        double hi = lo;
        for (const dataset::Row& row : ds.rows) {
            lo = std::min(lo, row.values[f]);
            hi = std::max(hi, row.values[f]);
        }
        double score = 0.0;
        if (hi > lo) {
            const double width = (hi - lo) / bins;
            std::vector<std::vector<std::size_t>> joint(
                static_cast<std::size_t>(bins), std::vector<std::size_t>(n_classes, 0));
            std::vector<std::size_t> bin_totals(static_cast<std::size_t>(bins), 0);
            for (const dataset::Row& row : ds.rows) {
                const int b = std::min(bins - 1, static_cast<int>((row.values[f] - lo) / width));
                joint[static_cast<std::size_t>(b)][static_cast<std::size_t>(row.label)]++;
                bin_totals[static_cast<std::size_t>(b)]++;
            }
            double conditional = 0.0;
            for (int b = 0; b < bins; ++b) {
                const std::size_t bi = static_cast<std::size_t>(b);
                if (bin_totals[bi] == 0) continue;
                conditional += (static_cast<double>(bin_totals[bi]) /
                                static_cast<double>(n_rows)) *
                               entropy(joint[bi], bin_totals[bi]);
            }
            score = class_entropy - conditional;
        }
        ranked.entries.emplace_back(ds.schema[f], score);
    }
    std::stable_sort(ranked.entries.begin(), ranked.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranked;
}

std::uint64_t fold_fingerprint(const std::vector<std::vector<std::size_t>>& folds) {
    // FNV-1a over the fold assignment.
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    const auto mix = [&](std::uint64_t v) {
        hash ^= v;
        hash *= 0x100000001B3ULL;
    };
    for (const auto& fold : folds) {
        mix(0xFFFFFFFFFFFFFFFFULL);
        for (std::size_t idx : fold) mix(idx);
    }
    return hash;
}

ElbowCurve elbow_sweep(const dataset::FeatureDataset& ds, std::span<const int> tree_counts,
                       models::ModelConfig config, int k, std::uint64_t seed) {
    if (tree_counts.empty()) throw ConfigError("elbow sweep needs at least one tree count");

    const std::vector<std::vector<std::size_t>> folds = dataset::stratified_folds(ds, k, seed);
    ElbowCurve curve;
    curve.fold_fingerprint = fold_fingerprint(folds);
    curve.points.reserve(tree_counts.size());
    for (int trees : tree_counts) {
        config.trees = trees;
        const MetricsReport report = cross_validate_with_folds(config, ds, folds);
        curve.points.push_back(ElbowPoint{trees, report.accuracy});
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Experiment specs

namespace {

std::string strip(const std::string& s) {
    const std::size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const std::size_t end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

ExperimentSpec parse_experiment_text(const std::string& text, const std::string& origin) {
    ExperimentSpec spec;
    spec.model.kind = models::ModelKind::rf;
    spec.side_model = spec.model;

    std::istringstream in(text);
    std::string raw_line;
    long line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string line = raw_line;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = unquote(strip(line.substr(eq + 1)));

        if (key == "name") {
            spec.name = value;
        } else if (key == "raw") {
            spec.raw_path = value;
        } else if (key == "features") {
            spec.features_path = value;
        } else if (key == "schema") {
            if (value != "full103" && value != "reduced94") {
                throw ConfigError(where + ": schema must be full103 or reduced94");
            }
            spec.schema = value;
        } else if (key == "filters") {
            const auto kind = signal::smoothing_from_string(value);
            if (!kind) throw ConfigError(where + ": unknown filters '" + value + "'");
            spec.filters.smoothing = *kind;
        } else if (key == "kernel") {
            spec.filters.kernel_size = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "alpha") {
            spec.filters.gravity_alpha = csv::parse_double(value, where);
        } else if (key == "model") {
            const auto kind = models::model_kind_from_string(value);
            if (!kind) throw ConfigError(where + ": unknown model '" + value + "'");
            spec.model.kind = *kind;
        } else if (key == "trees") {
            spec.model.trees = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "nfeat") {
            spec.model.n_features = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "knn_k") {
            spec.model.knn_k = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "min_leaf") {
            spec.model.min_leaf = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "side_trees") {
            spec.side_model.trees = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "side_nfeat") {
            spec.side_model.n_features = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "folds" || key == "k") {
            spec.folds = static_cast<int>(csv::parse_int(value, where));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(csv::parse_int(value, where));
        } else if (key == "threads") {
            spec.model.threads = static_cast<int>(csv::parse_int(value, where));
        } else {
            throw ConfigError(where + ": unknown experiment key '" + key + "'");
        }
    }

    if (spec.raw_path.empty() == spec.features_path.empty()) {
        throw ConfigError(origin + ": specify exactly one of 'raw' or 'features'");
    }
    return spec;
}

ExperimentSpec parse_experiment(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_text(buffer.str(), path);
}

// ---------------------------------------------------------------------------
// Experiment runner and reports

namespace {

void echo_config(ExperimentResult& result, const ExperimentSpec& spec, std::size_t rows,
                 std::size_t features) {
    auto& p = result.provenance;
    p.emplace_back("name", spec.name);
    p.emplace_back("dataset", spec.raw_path.empty() ? spec.features_path : spec.raw_path);
    p.emplace_back("dataset_kind", spec.raw_path.empty() ? "features" : "raw");
    p.emplace_back("rows", std::to_string(rows));
    p.emplace_back("features", std::to_string(features));
    p.emplace_back("schema", spec.schema);
    p.emplace_back("filters", std::string(signal::to_string(spec.filters.smoothing)));
    p.emplace_back("kernel", std::to_string(spec.filters.kernel_size));
    p.emplace_back("alpha", csv::format_value(spec.filters.gravity_alpha));
    p.emplace_back("model", std::string(models::to_string(spec.model.kind)));
    p.emplace_back("trees", std::to_string(spec.model.trees));
    p.emplace_back("nfeat", std::to_string(spec.model.n_features));
    p.emplace_back("knn_k", std::to_string(spec.model.knn_k));
    p.emplace_back("min_leaf", std::to_string(spec.model.min_leaf));
    p.emplace_back("folds", std::to_string(spec.folds));
    p.emplace_back("seed", std::to_string(spec.seed));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const bool hierarchical = spec.model.kind == models::ModelKind::hierarchical;
    if (hierarchical && spec.raw_path.empty()) {
        throw ConfigError("hierarchical experiments need 'raw' input for x-features");
    }

    dataset::FeatureDataset ds;
    dataset::FeatureDataset x_ds;
    if (!spec.raw_path.empty()) {
        const dataset::RawDataset raw = dataset::load_raw(spec.raw_path);
        ds = dataset::extract_dataset(raw, spec.filters);
        if (hierarchical) x_ds = dataset::extract_x_dataset(raw, spec.filters);
    } else {
        ds = dataset::load_features(spec.features_path);
    }
    if (spec.schema == "reduced94" && ds.feature_index(features::reduced_drop_list()[0]) >= 0) {
        ds = dataset::drop_features(ds, features::reduced_drop_list());
    }

    ExperimentResult result;
    echo_config(result, spec, ds.rows.size(), ds.n_features());

    if (hierarchical) {
        // Concatenated full + x-feature rows, evaluated with the two-stage model.
        dataset::FeatureDataset combined;
        combined.schema = ds.schema;
        combined.schema.insert(combined.schema.end(), x_ds.schema.begin(), x_ds.schema.end());
        combined.class_names = ds.class_names;
        combined.rows.reserve(ds.rows.size());
        for (std::size_t i = 0; i < ds.rows.size(); ++i) {
            dataset::Row row = ds.rows[i];
            row.values.insert(row.values.end(), x_ds.rows[i].values.begin(),
                              x_ds.rows[i].values.end());
            combined.rows.push_back(std::move(row));
        }

        const std::size_t full_width = ds.n_features();
        const auto folds = dataset::stratified_folds(combined, spec.folds, spec.seed);
        const std::size_t n_classes = combined.class_names.size();
        std::vector<std::vector<std::size_t>> confusion(
            n_classes, std::vector<std::size_t>(n_classes, 0));
        std::vector<double> prob_errors;

        for (std::size_t held_out = 0; held_out < folds.size(); ++held_out) {
            dataset::FeatureDataset train_full;
            dataset::FeatureDataset train_x;
            train_full.schema = ds.schema;
            train_full.class_names = combined.class_names;
            train_x.schema = x_ds.schema;
            train_x.class_names = combined.class_names;
            for (std::size_t f = 0; f < folds.size(); ++f) {
                if (f == held_out) continue;
                for (std::size_t i : folds[f]) {
                    dataset::Row full_row;
                    full_row.label = combined.rows[i].label;
                    full_row.values.assign(combined.rows[i].values.begin(),
                                           combined.rows[i].values.begin() +
                                               static_cast<long>(full_width));
                    train_full.rows.push_back(std::move(full_row));
                    dataset::Row x_row;
                    x_row.label = combined.rows[i].label;
                    x_row.values.assign(combined.rows[i].values.begin() +
                                            static_cast<long>(full_width),
                                        combined.rows[i].values.end());
                    train_x.rows.push_back(std::move(x_row));
                }
            }
            models::HierarchicalConfig configs{spec.model, spec.side_model};
            configs.main.kind = models::ModelKind::rf;
            configs.side.kind = models::ModelKind::rf;
            configs.main.seed = spec.seed;
            configs.side.seed = spec.seed;
            const auto model = models::train_hierarchical(configs, train_full, train_x);
            for (std::size_t i : folds[held_out]) {
                const dataset::Row& row = combined.rows[i];
                const models::Prediction pred = model->predict(row.values);
                confusion[static_cast<std::size_t>(row.label)]
                         [static_cast<std::size_t>(pred.label)]++;
                for (std::size_t c = 0; c < n_classes; ++c) {
                    const double y = c == static_cast<std::size_t>(row.label) ? 1.0 : 0.0;
                    prob_errors.push_back(std::abs(pred.probabilities[c] - y));
                }
            }
        }
        result.metrics = metrics_from_confusion(confusion, combined.class_names, prob_errors);
    } else {
        models::ModelConfig config = spec.model;
        config.seed = spec.seed;
        result.metrics = cross_validate(config, ds, spec.folds, spec.seed);
    }
    return result;
}

namespace {

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

}  // namespace

std::string format_report_table(const ExperimentResult& result) {
    const MetricsReport& m = result.metrics;
    std::ostringstream out;
    out << kReportVersionLine << '\n';
    for (const auto& [key, value] : result.provenance) {
        out << "# " << key << " = " << value << '\n';
    }
    out << '\n';
    out << "instances: " << m.total << '\n';
    out << "accuracy (%): " << percent(m.accuracy) << '\n';
    out << "weighted precision (%): " << percent(m.weighted_precision) << '\n';
    out << "weighted recall (%): " << percent(m.weighted_recall) << '\n';
    out << "weighted f1 (%): " << percent(m.weighted_f1) << '\n';
    out << "mae: " << csv::format_value(m.mae) << '\n';
    out << "rmse: " << csv::format_value(m.rmse) << '\n';
    out << '\n';
    out << "class, precision (%), recall (%), f1 (%)\n";
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        out << m.classes[c] << ", " << percent(m.precision[c]) << ", " << percent(m.recall[c])
            << ", " << percent(m.f1[c]) << '\n';
    }
    out << '\n';
    out << "confusion (rows = actual, columns = predicted):\n";
    for (std::size_t a = 0; a < m.classes.size(); ++a) {
        out << m.classes[a];
        for (std::size_t p = 0; p < m.classes.size(); ++p) {
            out << ", " << m.confusion[a][p];
        }
        out << '\n';
    }
    return out.str();
}

void write_report_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);

    const MetricsReport& m = result.metrics;
    out << kReportVersionLine << '\n';
    out << "key,value\n";
    for (const auto& [key, value] : result.provenance) {
        out << "config." << key << ',' << value << '\n';
    }
    out << "metric.instances," << m.total << '\n';
    out << "metric.accuracy," << csv::format_value(m.accuracy) << '\n';
    out << "metric.weighted_precision," << csv::format_value(m.weighted_precision) << '\n';
    out << "metric.weighted_recall," << csv::format_value(m.weighted_recall) << '\n';
    out << "metric.weighted_f1," << csv::format_value(m.weighted_f1) << '\n';
    out << "metric.mae," << csv::format_value(m.mae) << '\n';
    out << "metric.rmse," << csv::format_value(m.rmse) << '\n';
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        out << "precision." << m.classes[c] << ',' << csv::format_value(m.precision[c]) << '\n';
        out << "recall." << m.classes[c] << ',' << csv::format_value(m.recall[c]) << '\n';
        out << "f1." << m.classes[c] << ',' << csv::format_value(m.f1[c]) << '\n';
    }
    for (std::size_t a = 0; a < m.classes.size(); ++a) {
        for (std::size_t p = 0; p < m.classes.size(); ++p) {
            out << "confusion." << m.classes[a] << '.' << m.classes[p] << ','
                << m.confusion[a][p] << '\n';
        }
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace harkit::eval
