#pragma once

#include "websift/boosting.hpp"
#include "websift/dataset.hpp"
#include "websift/features.hpp"
#include "websift/folds.hpp"
#include "websift/forest.hpp"
#include "websift/knn.hpp"
#include "websift/lasso.hpp"
#include "websift/metrics.hpp"
#include "websift/model_io.hpp"
#include "websift/selectors.hpp"
#include "websift/svm.hpp"
#include "websift/trace.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace websift {

struct HyperParams {
    LassoOptions lasso;
    int knn_k = 10;
    SvmOptions svm;
    ForestOptions forest;
    BoostOptions boost;
    IgOptions ig;
    double lasso_select_threshold = 1e-4;
};

// Supplies per-fold train/test encodings. Implementations must report the
// rows they use for any fit-time statistic through the audit; the runner
// arms the audit with the held-out fold, so touching a test row aborts.
class FoldDataProvider {
public:
    virtual ~FoldDataProvider() = default;
    virtual std::size_t size() const = 0;
    virtual const std::vector<int>& all_labels() const = 0;
    virtual void make_fold(std::span<const int> train_idx, std::span<const int> test_idx,
                           LeakageAudit& audit, Dataset& train_out, Dataset& test_out) const = 0;
};

// Pre-encoded matrix: folds are row slices. The vocabulary and encoding were
// fixed upstream of the experiment.
class MatrixProvider : public FoldDataProvider {
public:
    explicit MatrixProvider(Dataset data) : data_(std::move(data)) {}
    std::size_t size() const override { return data_.rows(); }
    const std::vector<int>& all_labels() const override { return data_.labels; }
    void make_fold(std::span<const int> train_idx, std::span<const int> test_idx,
                   LeakageAudit& audit, Dataset& train_out, Dataset& test_out) const override;

private:
    Dataset data_;
};

// Leakage-clean pipeline from raw sessions: the feature vocabulary is refit
// on the training sessions of every fold and applied to both splits.
class SessionProvider : public FoldDataProvider {
public:
    SessionProvider(std::vector<Session> sessions, ExtractConfig config);
    std::size_t size() const override { return sessions_.size(); }
    const std::vector<int>& all_labels() const override { return labels_; }
    void make_fold(std::span<const int> train_idx, std::span<const int> test_idx,
                   LeakageAudit& audit, Dataset& train_out, Dataset& test_out) const override;

private:
    std::vector<Session> sessions_;
    ExtractConfig config_;
    std::vector<int> labels_;
};

struct ExperimentConfig {
    std::vector<SelectorKind> selectors = {SelectorKind::none};
    std::vector<ClassifierKind> classifiers = {ClassifierKind::lasso, ClassifierKind::knn,
                                               ClassifierKind::svm, ClassifierKind::rf,
                                               ClassifierKind::boost};
    int folds = 10;
    std::uint64_t seed = 0;
    int jobs = 1;
    HyperParams hp;
};

struct FoldResult {
    int fold = 0;
    SelectorKind selector = SelectorKind::none;
    ClassifierKind classifier = ClassifierKind::lasso;
    std::size_t retained = 0;
    bool selection_fallback = false;
    MetricRecord metrics;
};

// Metric order used across summaries and report files.
inline constexpr const char* kMetricNames[6] = {"accuracy", "precision", "recall",
                                                "f1",       "gmean",     "auc"};

struct CellSummary {
    SelectorKind selector = SelectorKind::none;
    ClassifierKind classifier = ClassifierKind::lasso;
    double metric_mean[6] = {0, 0, 0, 0, 0, 0};
    double metric_std[6] = {0, 0, 0, 0, 0, 0};
    double mean_retained = 0.0;
    int auc_defined_folds = 0;
    bool significant = false; // ensemble beats every baseline in its selector row
    std::vector<double> fold_auc;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    int folds = 0;
    std::string config_json;
    std::vector<FoldResult> fold_results;
    std::vector<CellSummary> cells; // selector-major, classifier order as configured
    std::vector<std::string> warnings;
};

ExperimentReport run_experiment(const FoldDataProvider& provider, const ExperimentConfig& config);

std::vector<double> metric_values(const MetricRecord& m);

// Fits the configured classifier on `train` and scores every row of `test`.
std::vector<double> fit_and_score(ClassifierKind kind, const Dataset& train, const Dataset& test,
                                  const HyperParams& hp, std::uint64_t seed);

AnyModel fit_model(ClassifierKind kind, const Dataset& train, const HyperParams& hp,
                   std::uint64_t seed);

// Report emission (report.csv, report.json, auc_bars.csv, radar_*.csv).
void emit_report(const ExperimentReport& report, const std::string& out_dir);
std::string render_table(const ExperimentReport& report);

} // namespace websift
