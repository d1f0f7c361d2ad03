#include "websift/selectors.hpp"

#include "websift/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace websift {

SelectorKind parse_selector_kind(const std::string& name) {
    if (name == "none") return SelectorKind::none;
    if (name == "ig") return SelectorKind::ig;
    if (name == "lasso") return SelectorKind::lasso;
    if (name == "rf") return SelectorKind::rf;
    throw SchemaError("unknown selector '" + name + "'");
}

std::string to_string(SelectorKind kind) {
    switch (kind) {
    case SelectorKind::none: return "none";
    case SelectorKind::ig: return "ig";
    case SelectorKind::lasso: return "lasso";
    case SelectorKind::rf: return "rf";
    }
    return "?";
}

std::size_t SelectionResult::retained_count() const {
    std::size_t count = 0;
    for (auto m : mask) count += m;
    return count;
}

std::string SelectionResult::to_json_string() const {
    nlohmann::json j;
    j["method"] = websift::to_string(method);
    j["fallback_applied"] = fallback_applied;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        entries.push_back({{"name", scores[i].name},
                           {"score", scores[i].score},
                           {"retained", mask[i] != 0}});
    }
    j["features"] = entries;
    return j.dump(2);
}

double entropy(std::span<const int> symbols) {
    if (symbols.empty()) throw DataError("entropy: empty column");
    std::unordered_map<int, std::size_t> counts;
    for (int s : symbols) ++counts[s];
    double n = static_cast<double>(symbols.size());
    double h = 0.0;
    for (const auto& [symbol, count] : counts) {
        double prob = static_cast<double>(count) / n;
        h -= prob * std::log2(prob);
    }
    return h;
}

std::vector<int> quantile_bin(std::span<const double> values, int bins) {
    if (bins < 1) throw DataError("quantile_bin: bins must be >= 1");
    std::vector<double> distinct(values.begin(), values.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> out(values.size());
    if (distinct.size() <= static_cast<std::size_t>(bins)) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            auto it = std::lower_bound(distinct.begin(), distinct.end(), values[i]);
            out[i] = static_cast<int>(it - distinct.begin());
        }
        return out;
    }

    // Equal-frequency edges at the q = b/bins order statistics.
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges; // upper edge of each bin except the last
    for (int b = 1; b < bins; ++b) {
        std::size_t idx = static_cast<std::size_t>(
            std::min<double>(static_cast<double>(sorted.size()) - 1.0,
                             std::floor(static_cast<double>(b) * static_cast<double>(sorted.size()) /
                                        static_cast<double>(bins))));
        edges.push_back(sorted[idx]);
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto it = std::lower_bound(edges.begin(), edges.end(), values[i]);
        out[i] = static_cast<int>(it - edges.begin());
    }
    return out;
}

std::vector<double> information_gain(const Dataset& data, int bins) {
    if (data.rows() == 0) throw DataError("information_gain: empty dataset");
    double h_label = entropy(data.labels);

    std::vector<double> gains(data.cols(), 0.0);
    for (std::size_t c = 0; c < data.cols(); ++c) {
        std::vector<double> column = data.column(c);
        std::vector<int> binned = quantile_bin(column, bins);
        double h_feature = entropy(binned);

        // Joint entropy over (label, bin) pairs.
        std::vector<int> joint(binned.size());
        for (std::size_t i = 0; i < binned.size(); ++i)
            joint[i] = binned[i] * 2 + data.labels[i];
        double h_joint = entropy(joint);
        gains[c] = h_label + h_feature - h_joint;
    }
    return gains;
}

namespace {

SelectionResult finalize(SelectorKind method, const Dataset& train,
                         const std::vector<double>& scores,
                         const std::vector<std::uint8_t>& raw_retained) {
    SelectionResult result;
    result.method = method;
    result.mask = raw_retained;
    for (std::size_t c = 0; c < train.cols(); ++c)
        result.scores.push_back({train.columns[c], scores[c], raw_retained[c] != 0});

    if (result.retained_count() == 0 && !scores.empty()) {
        std::size_t top = 0;
        for (std::size_t c = 1; c < scores.size(); ++c)
            if (scores[c] > scores[top]) top = c;
        result.mask[top] = 1;
        result.fallback_applied = true;
    }
    return result;
}

} // namespace

SelectionResult ig_select(const Dataset& train, const IgOptions& options) {
    std::vector<double> gains = information_gain(train, options.bins);
    double mean_gain = 0.0;
    for (double g : gains) mean_gain += g;
    mean_gain /= static_cast<double>(gains.size());

    std::vector<std::uint8_t> retained(gains.size(), 0);
    for (std::size_t c = 0; c < gains.size(); ++c) retained[c] = gains[c] > mean_gain ? 1 : 0;
    return finalize(SelectorKind::ig, train, gains, retained);
}

SelectionResult lasso_select(const Dataset& train, const LassoSelectOptions& options,
                             std::uint64_t seed) {
    LassoModel model = fit_lasso(train, options.lasso, seed);
    std::vector<double> scores(model.beta.size());
    std::vector<std::uint8_t> retained(model.beta.size(), 0);
    for (std::size_t c = 0; c < model.beta.size(); ++c) {
        scores[c] = std::fabs(model.beta[c]);
        retained[c] = scores[c] >= options.threshold ? 1 : 0;
    }
    return finalize(SelectorKind::lasso, train, scores, retained);
}

SelectionResult rf_select(const Dataset& train, const RfSelectOptions& options,
                          std::uint64_t seed) {
    ForestModel model = fit_forest(train, options.forest, seed);
    double mean_importance = 0.0;
    for (double v : model.importances) mean_importance += v;
    mean_importance /= static_cast<double>(model.importances.size());

    std::vector<std::uint8_t> retained(model.importances.size(), 0);
    for (std::size_t c = 0; c < model.importances.size(); ++c)
        retained[c] = model.importances[c] > mean_importance ? 1 : 0;
    return finalize(SelectorKind::rf, train, model.importances, retained);
}

SelectionResult no_selection(const Dataset& train) {
    SelectionResult result;
    result.method = SelectorKind::none;
    result.mask.assign(train.cols(), 1);
    for (std::size_t c = 0; c < train.cols(); ++c)
        result.scores.push_back({train.columns[c], 0.0, true});
    return result;
}

SelectionResult select_features(SelectorKind kind, const Dataset& train, const IgOptions& ig,
                                const LassoSelectOptions& lasso, const RfSelectOptions& rf,
                                std::uint64_t seed) {
    switch (kind) {
    case SelectorKind::none: return no_selection(train);
    case SelectorKind::ig: return ig_select(train, ig);
    case SelectorKind::lasso: return lasso_select(train, lasso, seed);
    case SelectorKind::rf: return rf_select(train, rf, seed);
    }
    throw DataError("select_features: unknown selector");
}

} // namespace websift
