#include "harkit/cli.hpp"

#include <iostream>

#include "CLI11.hpp"

#include "harkit/csv.hpp"
#include "harkit/dataset.hpp"
#include "harkit/error.hpp"
#include "harkit/eval.hpp"
#include "harkit/models.hpp"
#include "harkit/stream.hpp"

namespace harkit::cli {

namespace {

constexpr char kReportVersionLine[] = "# harkit-report-v1";

signal::FilterConfig make_filters(const std::string& kind, int kernel) {
    const auto smoothing = signal::smoothing_from_string(kind);
    if (!smoothing) throw ConfigError("unknown filter kind '" + kind + "'");
    signal::FilterConfig filters;
    filters.smoothing = *smoothing;
    filters.kernel_size = kernel;
    return filters;
}

struct CommonFlags {
    std::string in;
    std::string out;
    std::string schema = "full103";
    std::string filters = "none";
    int kernel = 11;
    std::string model = "rf";
    int trees = 100;
    int nfeat = 10;
    int knn_k = 30;
    int folds = 10;
    std::uint64_t seed = eval::kDefaultSeed;
    int threads = 1;
};

models::ModelConfig make_model_config(const CommonFlags& flags) {
    const auto kind = models::model_kind_from_string(flags.model);
    if (!kind) throw ConfigError("unknown model '" + flags.model + "'");
    models::ModelConfig config;
    config.kind = *kind;
    config.trees = flags.trees;
    config.n_features = flags.nfeat;
    config.knn_k = flags.knn_k;
    config.seed = flags.seed;
    config.threads = flags.threads;
    return config;
}

int cmd_extract(const CommonFlags& flags, const std::string& xout) {
    const dataset::RawDataset raw = dataset::load_raw(flags.in);
    const signal::FilterConfig filters = make_filters(flags.filters, flags.kernel);

    dataset::FeatureDataset ds = dataset::extract_dataset(raw, filters);
    if (flags.schema == "reduced94") {
        ds = dataset::drop_features(ds, features::reduced_drop_list());
    } else if (flags.schema != "full103") {
        throw ConfigError("schema must be full103 or reduced94");
    }
    dataset::save_features(ds, flags.out);
    std::cout << "extracted " << ds.rows.size() << " windows x " << ds.n_features() + 1
              << " attributes -> " << flags.out << '\n';

    if (!xout.empty()) {
        const dataset::FeatureDataset x_ds = dataset::extract_x_dataset(raw, filters);
        dataset::save_features(x_ds, xout);
        std::cout << "extracted x-features -> " << xout << '\n';
    }
    return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& xin) {
    const models::ModelConfig config = make_model_config(flags);

    std::unique_ptr<models::TrainedModel> model;
    if (config.kind == models::ModelKind::hierarchical) {
        if (xin.empty()) {
            throw ConfigError("hierarchical training needs --xin with the x-feature CSV");
        }
        const dataset::FeatureDataset full = dataset::load_features(flags.in);
        const dataset::FeatureDataset x_feats =
            dataset::load_features(xin, dataset::SchemaId::xaxis72);
        models::HierarchicalConfig configs;
        configs.main = config;
        configs.main.kind = models::ModelKind::rf;
        configs.side = configs.main;
        model = models::train_hierarchical(configs, full, x_feats);
    } else {
        const dataset::FeatureDataset ds = dataset::load_features(flags.in);
        model = models::train(config, ds);
    }
    models::save_model(*model, flags.out);
    std::cout << "trained " << flags.model << " on " << flags.in << " -> " << flags.out << '\n';
    return 0;
}

int cmd_eval(const std::string& spec_path, const std::string& out, int threads) {
    eval::ExperimentSpec spec = eval::parse_experiment(spec_path);
    if (threads > 0) spec.model.threads = threads;
    const eval::ExperimentResult result = eval::run_experiment(spec);
    std::cout << eval::format_report_table(result);
    if (!out.empty()) {
        eval::write_report_csv(result, out);
        std::cout << "report -> " << out << '\n';
    }
    return 0;
}

int cmd_rank(const CommonFlags& flags, int bins) {
    const dataset::FeatureDataset ds = dataset::load_features(flags.in);
    const eval::RankedFeatures ranked = eval::info_gain_rank(ds, bins);

    std::ofstream out(flags.out, std::ios::binary);
    if (!out) throw IoError("cannot write " + flags.out);
    out << kReportVersionLine << '\n';
    out << "# in = " << flags.in << '\n';
    out << "# bins = " << bins << '\n';
    out << "rank,feature,score\n";
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
        out << i + 1 << ',' << ranked.entries[i].first << ','
            << csv::format_value(ranked.entries[i].second) << '\n';
    }
    std::cout << "ranked " << ranked.entries.size() << " features -> " << flags.out << '\n';
    return 0;
}

int cmd_summarize(const CommonFlags& flags) {
    const dataset::FeatureDataset ds = dataset::load_features(flags.in);
    const dataset::DistributionSummary summary = dataset::summarize(ds);

    std::ofstream out(flags.out, std::ios::binary);
    if (!out) throw IoError("cannot write " + flags.out);
    out << kReportVersionLine << '\n';
    out << "# in = " << flags.in << '\n';
    out << "kind,name,min,q1,median,q3,max,mean,outliers,count\n";
    for (const dataset::FeatureSummary& f : summary.features) {
        out << "feature," << f.name << ',' << csv::format_value(f.min) << ','
            << csv::format_value(f.q1) << ',' << csv::format_value(f.median) << ','
            << csv::format_value(f.q3) << ',' << csv::format_value(f.max) << ','
            << csv::format_value(f.mean) << ',' << f.outliers << ",\n";
    }
    for (const auto& [name, count] : summary.class_counts) {
        out << "class," << name << ",,,,,,,," << count << '\n';
    }
    std::cout << "summarized " << ds.rows.size() << " rows -> " << flags.out << '\n';
    return 0;
}

int cmd_elbow(const CommonFlags& flags, const std::string& counts_arg) {
    const dataset::FeatureDataset ds = dataset::load_features(flags.in);

    std::vector<int> counts;
    for (const std::string& token : csv::split(counts_arg)) {
        counts.push_back(static_cast<int>(csv::parse_int(token, "--counts")));
    }
    models::ModelConfig config = make_model_config(flags);
    config.kind = models::ModelKind::rf;
    const eval::ElbowCurve curve = eval::elbow_sweep(ds, counts, config, flags.folds, flags.seed);

    std::ofstream out(flags.out, std::ios::binary);
    if (!out) throw IoError("cannot write " + flags.out);
    out << kReportVersionLine << '\n';
    out << "# in = " << flags.in << '\n';
    out << "# folds = " << flags.folds << '\n';
    out << "# nfeat = " << flags.nfeat << '\n';
    out << "# seed = " << flags.seed << '\n';
    out << "# fold_fingerprint = " << curve.fold_fingerprint << '\n';
    out << "trees,accuracy\n";
    for (const eval::ElbowPoint& point : curve.points) {
        out << point.trees << ',' << csv::format_value(point.accuracy) << '\n';
    }
    std::cout << "elbow sweep over " << counts.size() << " tree counts -> " << flags.out << '\n';
    return 0;
}

int cmd_replay(const CommonFlags& flags, const std::string& model_path, bool realtime,
               std::int64_t quiet_ms) {
    const std::unique_ptr<models::TrainedModel> model = models::load_model(model_path);
    const signal::FilterConfig filters = make_filters(flags.filters, flags.kernel);

    stream::Replay replay(flags.in, signal::kSampleRateHz, realtime);
    stream::DebounceState debounce;
    debounce.quiet_window_ms = quiet_ms;
    const stream::SampleFeed feed = replay.feed();
    const stream::StreamResult result = stream::streaming_predict(feed, *model, filters, debounce);

    stream::event_log(result.events, flags.out);
    for (const stream::StreamError& error : result.errors) {
        std::cerr << "window " << error.window_index << ": " << error.message << '\n';
    }
    std::cout << "replayed " << flags.in << ": " << result.events.size() << " events -> "
              << flags.out << '\n';
    return result.errors.empty() ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"harkit - inertial activity recognition toolkit", "har"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string xout;
    std::string xin;
    std::string spec_path;
    std::string model_path;
    std::string counts_arg = "100";
    int bins = 10;
    bool realtime = false;
    std::int64_t quiet_ms = 1000;

    const auto add_filter_flags = [&](CLI::App* cmd) {
        cmd->add_option("--filters", flags.filters, "none|median|mean|median_mean");
        cmd->add_option("--kernel", flags.kernel, "smoothing kernel size (odd)");
    };
    const auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--model", flags.model, "rf|bagging|tree|knn|nb|hier");
        cmd->add_option("--trees", flags.trees, "ensemble size");
        cmd->add_option("--nfeat", flags.nfeat, "candidate features per split (rf)");
        cmd->add_option("--k", flags.knn_k, "neighbors (knn)");
        cmd->add_option("--seed", flags.seed, "training/CV seed");
        cmd->add_option("--threads", flags.threads, "worker cap");
    };

    CLI::App* extract = app.add_subcommand("extract", "raw CSV -> feature CSV");
    extract->add_option("--in", flags.in, "raw CSV")->required();
    extract->add_option("--out", flags.out, "feature CSV")->required();
    extract->add_option("--schema", flags.schema, "full103|reduced94");
    extract->add_option("--xout", xout, "also write the x-feature CSV");
    add_filter_flags(extract);

    CLI::App* train = app.add_subcommand("train", "feature CSV -> model file");
    train->add_option("--in", flags.in, "feature CSV")->required();
    train->add_option("--out", flags.out, "model file")->required();
    train->add_option("--xin", xin, "x-feature CSV (hier)");
    add_model_flags(train);

    CLI::App* eval_cmd = app.add_subcommand("eval", "run an experiment spec");
    eval_cmd->add_option("--spec", spec_path, "experiment spec file")->required();
    eval_cmd->add_option("--out", flags.out, "machine-readable report CSV");
    eval_cmd->add_option("--threads", flags.threads, "worker cap");

    CLI::App* rank = app.add_subcommand("rank", "info-gain feature ranking");
    rank->add_option("--in", flags.in, "feature CSV")->required();
    rank->add_option("--out", flags.out, "ranking CSV")->required();
    rank->add_option("--bins", bins, "discretization bins");

    CLI::App* replay = app.add_subcommand("replay", "stream raw CSV through a model");
    replay->add_option("--in", flags.in, "raw CSV")->required();
    replay->add_option("--model-file", model_path, "trained model file")->required();
    replay->add_option("--out", flags.out, "event log CSV")->required();
    replay->add_flag("--realtime", realtime, "pace samples at 50 Hz");
    replay->add_option("--quiet-ms", quiet_ms, "debounce quiet window");
    add_filter_flags(replay);

    CLI::App* summarize = app.add_subcommand("summarize", "per-feature distribution summary");
    summarize->add_option("--in", flags.in, "feature CSV")->required();
    summarize->add_option("--out", flags.out, "summary CSV")->required();

    CLI::App* elbow = app.add_subcommand("elbow", "accuracy vs tree count sweep");
    elbow->add_option("--in", flags.in, "feature CSV")->required();
    elbow->add_option("--out", flags.out, "curve CSV")->required();
    elbow->add_option("--counts", counts_arg, "comma-separated tree counts")->required();
    elbow->add_option("--folds", flags.folds, "CV folds");
    elbow->add_option("--nfeat", flags.nfeat, "candidate features per split");
    elbow->add_option("--seed", flags.seed, "CV seed");
    elbow->add_option("--threads", flags.threads, "worker cap");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n' << app.help();
        return 1;
    }

    try {
        if (extract->parsed()) return cmd_extract(flags, xout);
        if (train->parsed()) return cmd_train(flags, xin);
        if (eval_cmd->parsed()) {
            const int thread_override =
                eval_cmd->count("--threads") > 0 ? flags.threads : -1;
            return cmd_eval(spec_path, flags.out, thread_override);
        }
        if (rank->parsed()) return cmd_rank(flags, bins);
        if (replay->parsed()) return cmd_replay(flags, model_path, realtime, quiet_ms);
        if (summarize->parsed()) return cmd_summarize(flags);
        if (elbow->parsed()) return cmd_elbow(flags, counts_arg);
        std::cerr << app.help();
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace harkit::cli
