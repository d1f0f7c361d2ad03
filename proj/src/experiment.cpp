#include "websift/experiment.hpp"

#include "websift/errors.hpp"
#include "websift/parallel.hpp"
#include "websift/rng.hpp"
#include "websift/wilcoxon.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace websift {

void MatrixProvider::make_fold(std::span<const int> train_idx, std::span<const int> test_idx,
                               LeakageAudit& audit, Dataset& train_out,
                               Dataset& test_out) const {
    audit.record_fit_access(train_idx, "fold-data");
    train_out = data_.subset_rows(train_idx);
    test_out = data_.subset_rows(test_idx);
}

SessionProvider::SessionProvider(std::vector<Session> sessions, ExtractConfig config)
    : sessions_(std::move(sessions)), config_(std::move(config)) {
    labels_.reserve(sessions_.size());
    for (const auto& s : sessions_)
        labels_.push_back(s.label == TraceLabel::attack ? 1 : 0);
}

void SessionProvider::make_fold(std::span<const int> train_idx, std::span<const int> test_idx,
                                LeakageAudit& audit, Dataset& train_out,
                                Dataset& test_out) const {
    audit.record_fit_access(train_idx, "vocabulary");
    std::vector<Session> train_sessions;
    train_sessions.reserve(train_idx.size());
    for (int i : train_idx) train_sessions.push_back(sessions_[static_cast<std::size_t>(i)]);
    FeatureVocabulary vocab = build_vocabulary(train_sessions, config_);

    train_out = encode_sessions(train_sessions, vocab);
    std::vector<Session> test_sessions;
    test_sessions.reserve(test_idx.size());
    for (int i : test_idx) test_sessions.push_back(sessions_[static_cast<std::size_t>(i)]);
    test_out = encode_sessions(test_sessions, vocab);
}

std::vector<double> metric_values(const MetricRecord& m) {
    return {m.accuracy, m.precision, m.recall, m.f1, m.gmean, m.auc};
}

AnyModel fit_model(ClassifierKind kind, const Dataset& train, const HyperParams& hp,
                   std::uint64_t seed) {
    AnyModel out;
    out.schema_fingerprint = train.schema_fingerprint();
    switch (kind) {
    case ClassifierKind::lasso: out.model = fit_lasso(train, hp.lasso, seed); break;
    case ClassifierKind::knn: out.model = fit_knn(train, hp.knn_k); break;
    case ClassifierKind::svm: out.model = fit_svm(train, hp.svm); break;
    case ClassifierKind::rf: out.model = fit_forest(train, hp.forest, seed); break;
    case ClassifierKind::boost: out.model = fit_boost(train, hp.boost, seed); break;
    }
    return out;
}

std::vector<double> fit_and_score(ClassifierKind kind, const Dataset& train, const Dataset& test,
                                  const HyperParams& hp, std::uint64_t seed) {
    AnyModel model = fit_model(kind, train, hp, seed);
    std::vector<double> scores(test.rows());
    for (std::size_t r = 0; r < test.rows(); ++r) scores[r] = model.score(test.row(r));
    return scores;
}

namespace {

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    std::vector<std::string> selectors, classifiers;
    for (auto s : config.selectors) selectors.push_back(to_string(s));
    for (auto c : config.classifiers) classifiers.push_back(to_string(c));
    j["selectors"] = selectors;
    j["classifiers"] = classifiers;
    j["folds"] = config.folds;
    j["seed"] = config.seed;
    j["hyperparams"] = {
        {"knn_k", config.hp.knn_k},
        {"svm_cost", config.hp.svm.cost},
        {"svm_gamma", config.hp.svm.gamma},
        {"rf_n_trees", config.hp.forest.n_trees},
        {"rf_mtry", config.hp.forest.mtry},
        {"boost_n_learners", config.hp.boost.n_learners},
        {"boost_max_depth", config.hp.boost.max_depth},
        {"boost_learning_rate", config.hp.boost.learning_rate},
        {"boost_l2_reg", config.hp.boost.l2_reg},
        {"lasso_inner_folds", config.hp.lasso.inner_folds},
        {"lasso_grid_size", config.hp.lasso.grid_size},
        {"lasso_select_threshold", config.hp.lasso_select_threshold},
        {"ig_bins", config.hp.ig.bins},
    };
    return j;
}

std::uint64_t cell_seed(std::uint64_t seed, SelectorKind sel, ClassifierKind clf, int fold) {
    return derive_seed(seed, "cell:" + to_string(sel) + ":" + to_string(clf),
                       static_cast<std::uint64_t>(fold));
}

std::uint64_t selector_seed(std::uint64_t seed, SelectorKind sel, int fold) {
    return derive_seed(seed, "selector:" + to_string(sel), static_cast<std::uint64_t>(fold));
}

} // namespace

ExperimentReport run_experiment(const FoldDataProvider& provider,
                                const ExperimentConfig& config) {
    if (config.selectors.empty() || config.classifiers.empty())
        throw ProtocolError("run_experiment: empty selector or classifier grid");

    const std::vector<int>& labels = provider.all_labels();
    auto folds = stratified_kfold(labels, config.folds, config.seed);
    const std::size_t n_folds = folds.size();
    const std::size_t n_sel = config.selectors.size();
    const std::size_t n_clf = config.classifiers.size();

    ExperimentReport report;
    report.seed = config.seed;
    report.folds = config.folds;
    report.config_json = config_to_json(config).dump(2);

    // Phase 1: per-fold encodings.
    struct FoldData {
        Dataset train, test;
        std::vector<int> train_idx;
    };
    std::vector<FoldData> fold_data(n_folds);
    parallel_for(n_folds, config.jobs, [&](std::size_t f) {
        fold_data[f].train_idx = complement_indices(provider.size(), folds[f]);
        LeakageAudit audit(provider.size(), folds[f]);
        provider.make_fold(fold_data[f].train_idx, folds[f], audit, fold_data[f].train,
                           fold_data[f].test);
    });

    // Phase 2: per (fold, selector) masks, fit on the training split only.
    std::vector<SelectionResult> selections(n_folds * n_sel);
    LassoSelectOptions lasso_sel;
    lasso_sel.threshold = config.hp.lasso_select_threshold;
    lasso_sel.lasso = config.hp.lasso;
    RfSelectOptions rf_sel;
    rf_sel.forest = config.hp.forest;
    parallel_for(n_folds * n_sel, config.jobs, [&](std::size_t task) {
        std::size_t f = task / n_sel;
        std::size_t s = task % n_sel;
        LeakageAudit audit(provider.size(), folds[f]);
        audit.record_fit_access(fold_data[f].train_idx, "selector:" +
                                                            to_string(config.selectors[s]));
        selections[task] =
            select_features(config.selectors[s], fold_data[f].train, config.hp.ig, lasso_sel,
                            rf_sel, selector_seed(config.seed, config.selectors[s],
                                                  static_cast<int>(f)));
    });

    // Phase 3: per (selector, classifier, fold) training and evaluation.
    report.fold_results.assign(n_sel * n_clf * n_folds, FoldResult{});
    parallel_for(n_sel * n_clf * n_folds, config.jobs, [&](std::size_t task) {
        std::size_t s = task / (n_clf * n_folds);
        std::size_t c = (task / n_folds) % n_clf;
        std::size_t f = task % n_folds;
        SelectorKind sel = config.selectors[s];
        ClassifierKind clf = config.classifiers[c];
        const SelectionResult& selection = selections[f * n_sel + s];

        LeakageAudit audit(provider.size(), folds[f]);
        audit.record_fit_access(fold_data[f].train_idx, "classifier:" + to_string(clf));

        Dataset train = fold_data[f].train.subset_columns(selection.mask);
        Dataset test = fold_data[f].test.subset_columns(selection.mask);
        std::vector<double> scores = fit_and_score(
            clf, train, test, config.hp, cell_seed(config.seed, sel, clf, static_cast<int>(f)));

        FoldResult& result = report.fold_results[task];
        result.fold = static_cast<int>(f);
        result.selector = sel;
        result.classifier = clf;
        result.retained = selection.retained_count();
        result.selection_fallback = selection.fallback_applied;
        result.metrics = compute_metrics(scores, test.labels);
    });

    // Aggregate cells.
    for (std::size_t s = 0; s < n_sel; ++s) {
        for (std::size_t c = 0; c < n_clf; ++c) {
            CellSummary cell;
            cell.selector = config.selectors[s];
            cell.classifier = config.classifiers[c];
            std::vector<std::vector<double>> per_metric(6);
            double retained_sum = 0.0;
            for (std::size_t f = 0; f < n_folds; ++f) {
                const FoldResult& r = report.fold_results[(s * n_clf + c) * n_folds + f];
                std::vector<double> values = metric_values(r.metrics);
                for (int m = 0; m < 6; ++m) {
                    if (m == 5 && !r.metrics.auc_defined) continue;
                    per_metric[static_cast<std::size_t>(m)].push_back(
                        values[static_cast<std::size_t>(m)]);
                }
                if (r.metrics.auc_defined) cell.fold_auc.push_back(r.metrics.auc);
                retained_sum += static_cast<double>(r.retained);
            }
            cell.auc_defined_folds = static_cast<int>(cell.fold_auc.size());
            if (cell.auc_defined_folds < static_cast<int>(n_folds))
                report.warnings.push_back("cell " + to_string(cell.selector) + "/" +
                                          to_string(cell.classifier) +
                                          ": AUC undefined on some folds; excluded from averages");
            for (int m = 0; m < 6; ++m) {
                const auto& v = per_metric[static_cast<std::size_t>(m)];
                cell.metric_mean[m] = mean(v);
                cell.metric_std[m] = sample_stddev(v);
            }
            cell.mean_retained = retained_sum / static_cast<double>(n_folds);
            report.cells.push_back(std::move(cell));
        }
    }

    // Wilcoxon flags: within each selector row, an ensemble is starred when
    // it is significantly better than every baseline on fold-wise AUC.
    for (std::size_t s = 0; s < n_sel; ++s) {
        std::vector<const CellSummary*> baselines;
        for (std::size_t c = 0; c < n_clf; ++c) {
            const CellSummary& cell = report.cells[s * n_clf + c];
            if (!is_ensemble(cell.classifier)) baselines.push_back(&cell);
        }
        if (baselines.empty()) continue;
        for (std::size_t c = 0; c < n_clf; ++c) {
            CellSummary& cell = report.cells[s * n_clf + c];
            if (!is_ensemble(cell.classifier)) continue;
            bool beats_all = true;
            for (const CellSummary* base : baselines) {
                if (cell.fold_auc.size() != base->fold_auc.size() || cell.fold_auc.size() < 5) {
                    beats_all = false;
                    break;
                }
                WilcoxonResult w = wilcoxon_signed_rank(cell.fold_auc, base->fold_auc);
                double cell_mean = mean(cell.fold_auc);
                double base_mean = mean(base->fold_auc);
                if (!(w.p_value < 0.05 && cell_mean > base_mean)) {
                    beats_all = false;
                    break;
                }
            }
            cell.significant = beats_all;
        }
    }
    return report;
}

} // namespace websift
