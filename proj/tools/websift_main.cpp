#include "websift/csv.hpp"
#include "websift/errors.hpp"
#include "websift/experiment.hpp"
#include "websift/parallel.hpp"
#include "websift/run_config.hpp"
#include "websift/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace websift;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

void apply_map_flag(ColumnMap& columns, const std::string& map_flag) {
    for (const auto& item : split_list(map_flag)) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw SchemaError("--map expects name=column pairs, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        if (key == "method") columns.method = value;
        else if (key == "url") columns.url = value;
        else if (key == "payload") columns.payload = value;
        else if (key == "cookie") columns.cookie = value;
        else if (key == "label") columns.label = value;
        else throw SchemaError("--map: unknown field '" + key + "'");
    }
}

void report_parse_failures(const TraceParseResult& parsed) {
    if (parsed.failures.empty()) return;
    std::cerr << "[websift] " << parsed.failures.size() << " row(s) failed to parse:\n";
    std::size_t shown = 0;
    for (const auto& failure : parsed.failures) {
        if (shown++ >= 10) {
            std::cerr << "  ... (" << parsed.failures.size() - 10 << " more)\n";
            break;
        }
        std::cerr << "  line " << failure.line_no << ": " << failure.reason << "\n";
    }
}

std::vector<Session> load_sessions(const RunConfig& config, CorpusStats* stats_out = nullptr) {
    std::ifstream in(config.input, std::ios::binary);
    if (!in) throw DataError("cannot open " + config.input);
    TraceParseResult parsed = parse_trace_file(in, config.trace_options());
    report_parse_failures(parsed);

    GroupResult grouped =
        group_sessions(std::move(parsed.records), parse_label_rule(config.label_rule));
    for (const auto& rejected : grouped.rejected)
        std::cerr << "[websift] rejected session '" << rejected.session_id << "' ("
                  << rejected.n_records << " records): " << rejected.reason << "\n";

    CorpusStats stats = corpus_statistics(grouped.sessions);
    std::cout << "sessions: " << stats.sessions << "  normal: " << stats.normal
              << "  attack: " << stats.attack << "  (records: " << stats.records << ")\n";
    if (stats_out != nullptr) *stats_out = stats;
    return std::move(grouped.sessions);
}

Dataset load_dataset(const RunConfig& config) {
    if (!config.data.empty()) {
        std::ifstream in(config.data, std::ios::binary);
        if (!in) throw DataError("cannot open " + config.data);
        return load_dataset_csv(in);
    }
    if (config.input.empty())
        throw SchemaError("need --data (extracted dataset) or --input (raw trace)");
    std::vector<Session> sessions = load_sessions(config);
    if (sessions.empty()) throw DataError("no sessions in " + config.input);
    ExtractConfig extract_config;
    extract_config.url_base = config.url_base;
    extract_config.passthrough_names = config.passthrough;
    FeatureVocabulary vocab = build_vocabulary(sessions, extract_config);
    return encode_sessions(sessions, vocab);
}

int cmd_extract(const RunConfig& config, const std::string& vocab_in,
                const std::string& vocab_out) {
    std::vector<Session> sessions = load_sessions(config);

    ExtractConfig extract_config;
    extract_config.url_base = config.url_base;
    extract_config.passthrough_names = config.passthrough;

    FeatureVocabulary vocab;
    if (!vocab_in.empty()) {
        vocab = FeatureVocabulary::from_json_string(read_file(vocab_in));
    } else if (sessions.empty()) {
        std::cerr << "[websift] warning: empty input; writing an empty dataset with the "
                     "degenerate schema\n";
        vocab.url_base = extract_config.url_base;
        for (const auto& name : extract_config.passthrough_names)
            vocab.passthrough.push_back({name, true, {}});
    } else {
        vocab = build_vocabulary(sessions, extract_config);
    }

    EncodeDiagnostics diagnostics;
    Dataset data = encode_sessions(sessions, vocab, &diagnostics);

    fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "dataset.csv", std::ios::binary);
        save_dataset_csv(out, data);
    }
    fs::path vocab_path = vocab_out.empty() ? out_dir / "vocab.json" : fs::path(vocab_out);
    write_file(vocab_path, vocab.to_json_string() + "\n");

    std::cout << "encoded " << data.rows() << " sessions x " << data.cols() << " features -> "
              << (out_dir / "dataset.csv").string() << "\n";
    std::cout << "vocabulary: " << vocab.payload_keys.size() << " payload keys, "
              << vocab.url_extensions.size() << " url extensions, " << vocab.method_values.size()
              << " methods -> " << vocab_path.string() << "\n";
    if (diagnostics.unseen_payload_keys + diagnostics.unseen_methods +
            diagnostics.unseen_extensions + diagnostics.missing_passthrough >
        0)
        std::cout << "diagnostics: unseen keys " << diagnostics.unseen_payload_keys
                  << ", unseen methods " << diagnostics.unseen_methods << ", unseen extensions "
                  << diagnostics.unseen_extensions << ", missing passthrough "
                  << diagnostics.missing_passthrough << "\n";
    return 0;
}

int cmd_select(const RunConfig& config, const std::string& method, const std::string& out_path) {
    Dataset data = load_dataset(config);
    SelectorKind kind = parse_selector_kind(method);
    LassoSelectOptions lasso_options;
    lasso_options.threshold = config.hp.lasso_select_threshold;
    lasso_options.lasso = config.hp.lasso;
    RfSelectOptions rf_options;
    rf_options.forest = config.hp.forest;
    rf_options.forest.jobs = config.jobs > 0 ? config.jobs : default_jobs();
    SelectionResult result = select_features(kind, data, config.hp.ig, lasso_options, rf_options,
                                             config.resolved_seed());
    write_file(out_path, result.to_json_string() + "\n");
    std::cout << "method " << to_string(kind) << ": retained " << result.retained_count()
              << " of " << data.cols() << " features"
              << (result.fallback_applied ? " (top-1 fallback applied)" : "") << " -> "
              << out_path << "\n";
    return 0;
}

int cmd_train(const RunConfig& config, const std::string& kind_name,
              const std::string& out_path) {
    Dataset data = load_dataset(config);
    ClassifierKind kind = parse_classifier_kind(kind_name);
    AnyModel model = fit_model(kind, data, config.hp, config.resolved_seed());
    write_file(out_path, model.to_json_string() + "\n");
    std::cout << "trained " << to_string(kind) << " on " << data.rows() << " x " << data.cols()
              << " -> " << out_path << "\n";
    return 0;
}

int cmd_score(const RunConfig& config, const std::string& model_path,
              const std::string& out_path) {
    Dataset data = load_dataset(config);
    AnyModel model = AnyModel::from_json_string(read_file(model_path));
    if (model.schema_fingerprint != data.schema_fingerprint())
        throw SchemaError("schema fingerprint mismatch: model " + model.schema_fingerprint +
                          " vs data " + data.schema_fingerprint());

    std::vector<double> scores(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) scores[r] = model.score(data.row(r));

    std::ostringstream out;
    out << "score,label\n";
    char buf[64];
    for (std::size_t r = 0; r < data.rows(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.9f,%d\n", scores[r], data.labels[r]);
        out << buf;
    }
    write_file(out_path, out.str());

    MetricRecord m = compute_metrics(scores, data.labels);
    std::cout << "scored " << data.rows() << " rows -> " << out_path << "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", m.accuracy);
    std::cout << "accuracy " << buf;
    std::snprintf(buf, sizeof(buf), "%.4f", m.auc);
    std::cout << "  auc " << (m.auc_defined ? buf : "n/a") << "\n";
    return 0;
}

int cmd_synth(const SynthOptions& options, const std::string& out_path) {
    std::ostringstream out;
    generate_synthetic_trace(out, options);
    write_file(out_path, out.str());
    std::cout << "wrote " << options.n_sessions << " sessions (attack fraction "
              << options.attack_fraction << ") -> " << out_path << "\n";
    return 0;
}

int cmd_run(const RunConfig& config) {
    ExperimentConfig experiment_config = config.experiment_config();
    ExperimentReport report;

    if (!config.data.empty()) {
        std::ifstream in(config.data, std::ios::binary);
        if (!in) throw DataError("cannot open " + config.data);
        MatrixProvider provider(load_dataset_csv(in));
        report = run_experiment(provider, experiment_config);
    } else {
        if (config.input.empty())
            throw SchemaError("need --data (extracted dataset) or --input (raw trace)");
        std::vector<Session> sessions = load_sessions(config);
        ExtractConfig extract_config;
        extract_config.url_base = config.url_base;
        extract_config.passthrough_names = config.passthrough;
        SessionProvider provider(std::move(sessions), extract_config);
        report = run_experiment(provider, experiment_config);
    }

    emit_report(report, config.out_dir);
    write_file(fs::path(config.out_dir) / "run_config.cfg", config.to_file_string());
    std::cout << render_table(report);
    for (const auto& warning : report.warnings)
        std::cerr << "[websift] warning: " << warning << "\n";
    std::cout << "report files written to " << config.out_dir << "\n";
    return 0;
}

int cmd_tune(const RunConfig& config, double subset_fraction, int tune_folds,
             const std::string& gamma_grid, const std::string& cost_grid,
             const std::string& k_grid, const std::string& mtry_grid,
             const std::string& out_path) {
    Dataset data = load_dataset(config);
    std::uint64_t seed = config.resolved_seed();

    // Random stratified subset.
    Dataset subset;
    if (subset_fraction >= 1.0) {
        std::cerr << "[websift] warning: subset fraction 1.0 uses the full dataset; the grid "
                     "study may be slow\n";
        subset = data;
    } else {
        Rng rng(derive_seed(seed, "tune-subset"));
        std::vector<int> pos, neg;
        for (std::size_t i = 0; i < data.rows(); ++i)
            (data.labels[i] != 0 ? pos : neg).push_back(static_cast<int>(i));
        rng.shuffle(pos);
        rng.shuffle(neg);
        auto take = [&](std::vector<int>& v) {
            v.resize(std::max<std::size_t>(
                1, static_cast<std::size_t>(subset_fraction * static_cast<double>(v.size()))));
        };
        take(pos);
        take(neg);
        std::vector<int> keep;
        keep.insert(keep.end(), neg.begin(), neg.end());
        keep.insert(keep.end(), pos.begin(), pos.end());
        std::sort(keep.begin(), keep.end());
        subset = data.subset_rows(keep);
    }

    auto parse_grid = [](const std::string& grid) {
        std::vector<double> out;
        for (const auto& item : split_list(grid)) out.push_back(std::stod(item));
        return out;
    };

    // One-parameter-at-a-time AUC surface via a small stratified CV on the
    // subset, other hyperparameters held at their configured values.
    std::ostringstream out;
    out << "model,param,value,auc_mean,auc_std\n";
    auto folds = stratified_kfold(subset.labels, tune_folds, derive_seed(seed, "tune-folds"));

    auto evaluate = [&](ClassifierKind kind, const HyperParams& hp) {
        std::vector<double> aucs;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            std::vector<int> train_idx = complement_indices(subset.rows(), folds[f]);
            Dataset train = subset.subset_rows(train_idx);
            Dataset test = subset.subset_rows(folds[f]);
            std::vector<double> scores =
                fit_and_score(kind, train, test, hp,
                              derive_seed(seed, "tune-eval", static_cast<std::uint64_t>(f)));
            double auc = auc_rank(scores, test.labels);
            if (!std::isnan(auc)) aucs.push_back(auc);
        }
        return std::make_pair(mean(aucs), sample_stddev(aucs));
    };

    char buf[128];
    auto emit = [&](const char* model, const char* param, double value,
                    std::pair<double, double> result) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%g,%.6f,%.6f\n", model, param, value, result.first,
                      result.second);
        out << buf;
        std::cout << buf;
    };

    for (double gamma : parse_grid(gamma_grid)) {
        HyperParams hp = config.hp;
        hp.svm.gamma = gamma;
        emit("svm", "gamma", gamma, evaluate(ClassifierKind::svm, hp));
    }
    for (double cost : parse_grid(cost_grid)) {
        HyperParams hp = config.hp;
        hp.svm.cost = cost;
        emit("svm", "cost", cost, evaluate(ClassifierKind::svm, hp));
    }
    for (double k : parse_grid(k_grid)) {
        HyperParams hp = config.hp;
        hp.knn_k = static_cast<int>(k);
        emit("knn", "k", k, evaluate(ClassifierKind::knn, hp));
    }
    for (double mtry : parse_grid(mtry_grid)) {
        HyperParams hp = config.hp;
        hp.forest.mtry = static_cast<int>(mtry);
        emit("rf", "mtry", mtry, evaluate(ClassifierKind::rf, hp));
    }
    write_file(out_path, out.str());
    std::cout << "tune study -> " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"websift: HTTP trace feature extraction and web-attack classifier benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    RunConfig config;

    // Flag capture slots; only applied over the config file when provided.
    std::string input, data, format, map_flag, label_rule, url_base, passthrough, selectors,
        classifiers, out_dir, delimiter;
    int folds = 0, jobs = -1, knn_k = 0, rf_trees = 0, rf_mtry = 0, boost_learners = 0,
        boost_depth = 0, ig_bins = 0;
    double svm_cost = -1.0, svm_gamma = -1.0, boost_lr = -1.0, boost_l2 = -1.0,
           lasso_threshold = -1.0;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("--input", input, "raw trace file");
        cmd->add_option("--data", data, "pre-extracted dataset csv");
        cmd->add_option("--format", format, "csv | jsonl");
        cmd->add_option("--delimiter", delimiter, "field delimiter for csv traces");
        cmd->add_option("--map", map_flag,
                        "column mapping method=...,url=...,payload=...,cookie=...,label=...");
        cmd->add_option("--label-rule", label_rule,
                        "any-attack | majority | unanimous-else-reject");
        cmd->add_option("--url-base", url_base, "valid URL prefix");
        cmd->add_option("--passthrough", passthrough, "retained original columns (comma list)");
        cmd->add_option("--selectors", selectors, "comma list of none,ig,lasso,rf");
        cmd->add_option("--classifiers", classifiers, "comma list of lasso,knn,svm,rf,boost");
        cmd->add_option("--folds", folds, "outer cross-validation folds");
        cmd->add_option("--jobs", jobs, "worker threads (default: all cores)");
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--seed", seed_flag, "random seed (fallback: WEBSIFT_SEED)")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--knn-k", knn_k, "kNN neighbour count");
        cmd->add_option("--svm-cost", svm_cost, "SVM box constraint C");
        cmd->add_option("--svm-gamma", svm_gamma, "RBF kernel width");
        cmd->add_option("--rf-trees", rf_trees, "forest size");
        cmd->add_option("--rf-mtry", rf_mtry, "features sampled per split");
        cmd->add_option("--boost-learners", boost_learners, "boosting stages");
        cmd->add_option("--boost-depth", boost_depth, "boosting tree depth");
        cmd->add_option("--boost-learning-rate", boost_lr, "boosting shrinkage");
        cmd->add_option("--boost-l2", boost_l2, "boosting leaf L2 regularization");
        cmd->add_option("--lasso-threshold", lasso_threshold, "LASSO selection |beta| cutoff");
        cmd->add_option("--ig-bins", ig_bins, "IG discretization bins");
    };

    CLI::App* extract = app.add_subcommand("extract", "trace -> dataset.csv + vocab.json");
    std::string vocab_in, vocab_out;
    extract->add_option("--vocab-in", vocab_in, "transform with an existing vocabulary manifest");
    extract->add_option("--vocab-out", vocab_out, "vocabulary manifest path");
    add_common(extract);

    CLI::App* select = app.add_subcommand("select", "feature selection scores and mask");
    std::string select_method = "ig", select_out = "scores.json";
    select->add_option("--method", select_method, "ig | lasso | rf")->required();
    select->add_option("--out", select_out, "scores file");
    add_common(select);

    CLI::App* train = app.add_subcommand("train", "fit one classifier on a dataset");
    std::string train_kind, model_out = "model.json";
    train->add_option("--model-kind", train_kind, "lasso | knn | svm | rf | boost")->required();
    train->add_option("--out", model_out, "model file");
    add_common(train);

    CLI::App* score = app.add_subcommand("score", "score a dataset with a trained model");
    std::string model_in, score_out = "scores.csv";
    score->add_option("--model", model_in, "model file")->required();
    score->add_option("--out", score_out, "scores file");
    add_common(score);

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic trace");
    SynthOptions synth_options;
    std::string synth_out = "trace.csv";
    synth->add_option("--n", synth_options.n_sessions, "number of sessions");
    synth->add_option("--attack-fraction", synth_options.attack_fraction, "attack share");
    synth->add_option("--records-per-session", synth_options.max_records_per_session,
                      "max records per session");
    synth->add_option("--out", synth_out, "trace file");
    add_common(synth);

    CLI::App* run = app.add_subcommand("run", "full selector x classifier cross-validation");
    add_common(run);

    CLI::App* tune = app.add_subcommand("tune", "hyperparameter AUC surface on a subset");
    double subset_fraction = 0.25;
    int tune_folds = 3;
    std::string gamma_grid = "0.0015,0.005,0.015,0.05,0.15";
    std::string cost_grid = "100,1000,3000,10000";
    std::string k_grid = "1,5,10,20";
    std::string mtry_grid = "10,25,50";
    std::string tune_out = "tune.csv";
    tune->add_option("--subset-fraction", subset_fraction, "random subset share");
    tune->add_option("--tune-folds", tune_folds, "folds for the study");
    tune->add_option("--gamma-grid", gamma_grid, "SVM gamma grid (comma list)");
    tune->add_option("--cost-grid", cost_grid, "SVM cost grid");
    tune->add_option("--k-grid", k_grid, "kNN k grid");
    tune->add_option("--mtry-grid", mtry_grid, "RF mtry grid");
    tune->add_option("--out", tune_out, "study report file");
    add_common(tune);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) config = RunConfig::from_file(config_path);
        if (!input.empty()) config.input = input;
        if (!data.empty()) config.data = data;
        if (!format.empty()) config.format = format;
        if (!delimiter.empty()) config.delimiter = delimiter[0];
        if (!map_flag.empty()) apply_map_flag(config.columns, map_flag);
        if (!label_rule.empty()) config.label_rule = label_rule;
        if (!url_base.empty()) config.url_base = url_base;
        if (!passthrough.empty()) config.passthrough = split_list(passthrough);
        if (!selectors.empty()) config.selectors = split_list(selectors);
        if (!classifiers.empty()) config.classifiers = split_list(classifiers);
        if (folds > 0) config.folds = folds;
        if (jobs >= 0) config.jobs = jobs;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (seed_given) config.seed = seed_flag;
        if (knn_k > 0) config.hp.knn_k = knn_k;
        if (svm_cost > 0) config.hp.svm.cost = svm_cost;
        if (svm_gamma > 0) config.hp.svm.gamma = svm_gamma;
        if (rf_trees > 0) config.hp.forest.n_trees = rf_trees;
        if (rf_mtry > 0) config.hp.forest.mtry = rf_mtry;
        if (boost_learners > 0) config.hp.boost.n_learners = boost_learners;
        if (boost_depth > 0) config.hp.boost.max_depth = boost_depth;
        if (boost_lr > 0) config.hp.boost.learning_rate = boost_lr;
        if (boost_l2 >= 0) config.hp.boost.l2_reg = boost_l2;
        if (lasso_threshold >= 0) config.hp.lasso_select_threshold = lasso_threshold;
        if (ig_bins > 0) config.hp.ig.bins = ig_bins;

        if (extract->parsed()) return cmd_extract(config, vocab_in, vocab_out);
        if (select->parsed()) return cmd_select(config, select_method, select_out);
        if (train->parsed()) return cmd_train(config, train_kind, model_out);
        if (score->parsed()) return cmd_score(config, model_in, score_out);
        if (synth->parsed()) {
            if (seed_given) synth_options.seed = seed_flag;
            else synth_options.seed = config.resolved_seed();
            return cmd_synth(synth_options, synth_out);
        }
        if (run->parsed()) return cmd_run(config);
        if (tune->parsed())
            return cmd_tune(config, subset_fraction, tune_folds, gamma_grid, cost_grid, k_grid,
                            mtry_grid, tune_out);
    } catch (const ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
