#include "harkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "harkit/csv.hpp"
#include "harkit/error.hpp"

namespace harkit::dataset {

namespace {

constexpr int kRawColumns = 12;

signal::SensorSample parse_sample(const std::vector<std::string>& fields,
                                  const std::string& where) {
    signal::SensorSample s;
    s.timestamp_ms = csv::parse_int(fields[0], where + " timestamp_ms");
    const char* names[9] = {"acc_x", "acc_y", "acc_z", "gyr_x", "gyr_y",
                            "gyr_z", "mag_x", "mag_y", "mag_z"};
    double* slots[9] = {&s.acc.x, &s.acc.y, &s.acc.z, &s.gyr.x, &s.gyr.y,
                        &s.gyr.z, &s.mag.x, &s.mag.y, &s.mag.z};
    for (int i = 0; i < 9; ++i) {
        const double v = csv::parse_double(fields[static_cast<std::size_t>(i + 1)],
                                           where + " " + names[i]);
        if (!std::isfinite(v)) {
            throw DataError(where + ": non-finite value in column " + names[i]);
        }
        *slots[i] = v;
    }
    return s;
}

void check_raw_header(csv::LineReader& reader) {
    std::string header;
    if (!reader.next(header)) throw DataError(reader.path() + ": empty file");
    if (header != kRawHeader) {
        throw DataError(reader.path() + ":1: header does not match the raw schema '" +
                        kRawHeader + "'");
    }
}

std::string loc(const csv::LineReader& reader) {
    return reader.path() + ":" + std::to_string(reader.line_number());
}

bool matches(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Order-sensitive header diff for schema mismatch messages.
std::string schema_diff(const std::vector<std::string>& expected,
                        const std::vector<std::string>& got) {
    std::set<std::string> exp(expected.begin(), expected.end());
    std::set<std::string> act(got.begin(), got.end());
    std::string missing;
    std::string extra;
    for (const auto& name : expected) {
        if (!act.count(name)) missing += (missing.empty() ? "" : ", ") + name;
    }
    for (const auto& name : got) {
        if (!exp.count(name)) extra += (extra.empty() ? "" : ", ") + name;
    }
    std::string msg;
    if (!missing.empty()) msg += " missing: [" + missing + "]";
    if (!extra.empty()) msg += " extra: [" + extra + "]";
    if (msg.empty()) msg = " column order differs";
    return msg;
}

}  // namespace

int FeatureDataset::feature_index(std::string_view name) const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i] == name) return static_cast<int>(i);
    }
    return -1;
}

int FeatureDataset::class_index(std::string_view name) const {
    for (std::size_t i = 0; i < class_names.size(); ++i) {
        if (class_names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::size_t> FeatureDataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (const Row& row : rows) counts[static_cast<std::size_t>(row.label)]++;
    return counts;
}

std::vector<std::string> canonical_class_order(std::vector<std::string> present) {
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    const auto subset_of = [&](std::span<const std::string_view> universe) {
        return std::all_of(present.begin(), present.end(), [&](const std::string& p) {
            return std::find(universe.begin(), universe.end(), p) != universe.end();
        });
    };
    const auto ordered = [&](std::span<const std::string_view> universe) {
        std::vector<std::string> out;
        for (std::string_view name : universe) {
            if (std::find(present.begin(), present.end(), name) != present.end()) {
                out.emplace_back(name);
            }
        }
        return out;
    };
    if (subset_of(kActivityClassNames)) return ordered(kActivityClassNames);
    if (subset_of(kSuperClassNames)) return ordered(kSuperClassNames);
    if (subset_of(kSideClassNames)) return ordered(kSideClassNames);
    return present;  // already sorted
}

RawDataset load_raw(const std::string& path) {
    csv::LineReader reader(path);
    check_raw_header(reader);

    RawDataset ds;
    ds.source_file = path;

    std::string line;
    bool have_current = false;
    long long current_id = 0;
    std::set<long long> seen_ids;
    signal::SensorWindow current;
    WindowSource source;

    const auto close_window = [&](const std::string& where) {
        if (current.samples.size() != static_cast<std::size_t>(signal::kWindowSize)) {
            throw DataError(where + ": incomplete window " + std::to_string(current_id) +
                            " has " + std::to_string(current.samples.size()) + " rows, expected " +
                            std::to_string(signal::kWindowSize));
        }
        ds.windows.push_back(std::move(current));
        ds.sources.push_back(source);
        current = signal::SensorWindow{};
    };

    while (reader.next(line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv::split(line);
        if (fields.size() != kRawColumns) {
            throw DataError(loc(reader) + ": expected " + std::to_string(kRawColumns) +
                            " columns, got " + std::to_string(fields.size()));
        }
        ++ds.data_rows;

        const signal::SensorSample sample = parse_sample(fields, loc(reader));
        const auto label = activity_from_string(fields[10]);
        if (!label) {
            throw DataError(loc(reader) + ": unknown label '" + fields[10] + "'");
        }
        const long long id = csv::parse_int(fields[11], loc(reader) + " window_id");

        if (!have_current || id != current_id) {
            if (have_current) close_window(loc(reader));
            if (seen_ids.count(id)) {
                throw DataError(loc(reader) + ": window_id " + std::to_string(id) +
                                " is not contiguous");
            }
            seen_ids.insert(id);
            have_current = true;
            current_id = id;
            current.window_id = static_cast<int>(id);
            current.label = *label;
            source.first_line = reader.line_number();
        }
        if (current.label != *label) {
            throw DataError(loc(reader) + ": window " + std::to_string(id) +
                            " mixes labels '" + std::string(to_string(*current.label)) +
                            "' and '" + fields[10] + "'");
        }
        if (!current.samples.empty() &&
            sample.timestamp_ms < current.samples.back().timestamp_ms) {
            throw DataError(loc(reader) + ": timestamps must be non-decreasing within a window");
        }
        current.samples.push_back(sample);
        source.last_line = reader.line_number();
    }
    if (have_current) close_window(path + ":" + std::to_string(reader.line_number()));
    return ds;
}

std::vector<signal::SensorSample> load_raw_stream(const std::string& path) {
    csv::LineReader reader(path);
    check_raw_header(reader);

    std::vector<signal::SensorSample> samples;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv::split(line);
        if (fields.size() != kRawColumns) {
            throw DataError(loc(reader) + ": expected " + std::to_string(kRawColumns) +
                            " columns, got " + std::to_string(fields.size()));
        }
        const signal::SensorSample sample = parse_sample(fields, loc(reader));
        if (!samples.empty() && sample.timestamp_ms < samples.back().timestamp_ms) {
            throw DataError(loc(reader) + ": timestamps must be non-decreasing in a stream");
        }
        samples.push_back(sample);
    }
    return samples;
}

FeatureDataset load_features(const std::string& path, SchemaId expect) {
    csv::LineReader reader(path);
    std::string header;
    if (!reader.next(header)) throw DataError(path + ": empty file");

    std::vector<std::string> columns = csv::split(header);
    if (columns.size() < 2 || columns.back() != features::kClassColumn) {
        throw DataError(path + ":1: last column must be '" +
                        std::string(features::kClassColumn) + "'");
    }
    columns.pop_back();

    if (expect != SchemaId::any) {
        const std::vector<std::string>& wanted = expect == SchemaId::full103
                                                     ? features::full_schema()
                                                 : expect == SchemaId::reduced94
                                                     ? features::reduced_schema()
                                                     : features::x_schema();
        if (!matches(columns, wanted)) {
            throw DataError(path + ":1: schema mismatch:" + schema_diff(wanted, columns));
        }
    }

    FeatureDataset ds;
    ds.schema = columns;

    std::vector<std::pair<std::vector<double>, std::string>> parsed;
    std::vector<std::string> labels;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv::split(line);
        if (fields.size() != columns.size() + 1) {
            throw DataError(loc(reader) + ": expected " + std::to_string(columns.size() + 1) +
                            " columns, got " + std::to_string(fields.size()));
        }
        std::vector<double> values;
        values.reserve(columns.size());
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const double v = csv::parse_double(fields[i], loc(reader) + " " + columns[i]);
            if (!std::isfinite(v)) {
                throw DataError(loc(reader) + ": non-finite value in column " + columns[i]);
            }
            values.push_back(v);
        }
        const std::string& label = fields.back();
        if (label.empty()) throw DataError(loc(reader) + ": empty label");
        parsed.emplace_back(std::move(values), label);
        labels.push_back(label);
    }

    ds.class_names = canonical_class_order(labels);
    for (auto& [values, label] : parsed) {
        const int idx = ds.class_index(label);
        ds.rows.push_back(Row{std::move(values), idx});
    }
    return ds;
}

void save_features(const FeatureDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);

    std::vector<std::string> header = ds.schema;
    header.push_back(features::kClassColumn);
    out << csv::join(header) << '\n';

    for (const Row& row : ds.rows) {
        std::string line;
        for (double v : row.values) {
            line += csv::format_value(v);
            line += ',';
        }
        line += ds.class_names[static_cast<std::size_t>(row.label)];
        out << line << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

DistributionSummary summarize(const FeatureDataset& ds) {
    if (ds.rows.empty()) throw DataError("summarize: empty dataset");

    DistributionSummary summary;
    summary.features.reserve(ds.schema.size());
    std::vector<double> column(ds.rows.size());
    for (std::size_t f = 0; f < ds.schema.size(); ++f) {
        double sum = 0.0;
        for (std::size_t r = 0; r < ds.rows.size(); ++r) {
            column[r] = ds.rows[r].values[f];
            sum += column[r];
        }
        std::sort(column.begin(), column.end());

        FeatureSummary fs;
        fs.name = ds.schema[f];
        fs.min = column.front();
        fs.max = column.back();
        fs.mean = sum / static_cast<double>(column.size());
        fs.q1 = quantile_sorted(column, 0.25);
        fs.median = quantile_sorted(column, 0.5);
        fs.q3 = quantile_sorted(column, 0.75);
        const double iqr = fs.q3 - fs.q1;
        const double lo = fs.q1 - 1.5 * iqr;
        const double hi = fs.q3 + 1.5 * iqr;
        fs.outliers = static_cast<std::size_t>(
            std::count_if(column.begin(), column.end(), [&](double v) { return v < lo || v > hi; }));
        summary.features.push_back(std::move(fs));
    }

    const std::vector<std::size_t> counts = ds.class_counts();
    for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
        summary.class_counts.emplace_back(ds.class_names[c], counts[c]);
    }
    return summary;
}

namespace {

// rng()%n is fine here: n is tiny relative to 2^64 and the draw only needs to
// be deterministic, not unbiased to cryptographic standards.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

void shuffle_indices(std::vector<std::size_t>& indices, std::mt19937_64& rng) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        std::swap(indices[i - 1], indices[draw_index(rng, i)]);
    }
}

}  // namespace

std::vector<std::vector<std::size_t>> stratified_folds(const FeatureDataset& ds, int k,
                                                       std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified folds require k >= 2");

    std::vector<std::vector<std::size_t>> by_class(ds.class_names.size());
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        by_class[static_cast<std::size_t>(ds.rows[i].label)].push_back(i);
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].size() < static_cast<std::size_t>(k)) {
            throw DataError("class '" + ds.class_names[c] + "' has " +
                            std::to_string(by_class[c].size()) + " rows, fewer than k=" +
                            std::to_string(k));
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    // Rolling fold pointer across classes keeps both per-class and total fold
    // sizes within one of each other.
    std::size_t next_fold = 0;
    for (auto& indices : by_class) {
        shuffle_indices(indices, rng);
        for (std::size_t idx : indices) {
            folds[next_fold].push_back(idx);
            next_fold = (next_fold + 1) % static_cast<std::size_t>(k);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

FeatureDataset drop_features(const FeatureDataset& ds, std::span<const std::string> names) {
    std::vector<bool> drop(ds.schema.size(), false);
    for (const std::string& name : names) {
        const int idx = ds.feature_index(name);
        if (idx < 0) throw DataError("drop_features: unknown feature '" + name + "'");
        drop[static_cast<std::size_t>(idx)] = true;
    }

    FeatureDataset out;
    out.class_names = ds.class_names;
    for (std::size_t i = 0; i < ds.schema.size(); ++i) {
        if (!drop[i]) out.schema.push_back(ds.schema[i]);
    }
    out.rows.reserve(ds.rows.size());
    for (const Row& row : ds.rows) {
        Row slim;
        slim.label = row.label;
        slim.values.reserve(out.schema.size());
        for (std::size_t i = 0; i < row.values.size(); ++i) {
            if (!drop[i]) slim.values.push_back(row.values[i]);
        }
        out.rows.push_back(std::move(slim));
    }
    return out;
}

namespace {

FeatureDataset dataset_from_labeled_rows(std::vector<std::vector<double>> value_rows,
                                         const std::vector<ActivityClass>& labels,
                                         std::vector<std::string> schema) {
    std::vector<std::string> present;
    for (ActivityClass label : labels) present.emplace_back(to_string(label));

    FeatureDataset ds;
    ds.schema = std::move(schema);
    ds.class_names = canonical_class_order(present);
    ds.rows.reserve(value_rows.size());
    for (std::size_t i = 0; i < value_rows.size(); ++i) {
        ds.rows.push_back(Row{std::move(value_rows[i]),
                              ds.class_index(to_string(labels[i]))});
    }
    return ds;
}

}  // namespace

namespace {

ActivityClass require_label(const signal::SensorWindow& window) {
    if (!window.label) {
        throw DataError("window " + std::to_string(window.window_id) + " has no label");
    }
    return *window.label;
}

}  // namespace

FeatureDataset extract_dataset(const RawDataset& raw, const signal::FilterConfig& filters) {
    std::vector<std::vector<double>> rows;
    std::vector<ActivityClass> labels;
    rows.reserve(raw.windows.size());
    for (const signal::SensorWindow& window : raw.windows) {
        features::FeatureVector fv = features::extract_features(window, filters);
        rows.push_back(std::move(fv.values));
        labels.push_back(require_label(window));
    }
    return dataset_from_labeled_rows(std::move(rows), labels, features::full_schema());
}

FeatureDataset extract_x_dataset(const RawDataset& raw, const signal::FilterConfig& filters) {
    std::vector<std::vector<double>> rows;
    std::vector<ActivityClass> labels;
    rows.reserve(raw.windows.size());
    for (const signal::SensorWindow& window : raw.windows) {
        rows.push_back(features::extract_x_features(window, filters).flatten());
        labels.push_back(require_label(window));
    }
    return dataset_from_labeled_rows(std::move(rows), labels, features::x_schema());
}

}  // namespace harkit::dataset
