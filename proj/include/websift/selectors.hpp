#pragma once

#include "websift/dataset.hpp"
#include "websift/forest.hpp"
#include "websift/lasso.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace websift {

enum class SelectorKind { none, ig, lasso, rf };

SelectorKind parse_selector_kind(const std::string& name);
std::string to_string(SelectorKind kind);

struct FeatureScore {
    std::string name;
    double score = 0.0;
    bool retained = false; // raw rule, before the zero-retention fallback
};

struct SelectionResult {
    SelectorKind method = SelectorKind::none;
    std::vector<FeatureScore> scores;
    std::vector<std::uint8_t> mask; // final mask, after the fallback
    bool fallback_applied = false;  // raw rule retained nothing; kept top-1

    std::size_t retained_count() const;
    std::string to_json_string() const;
};

// Shannon entropy in bits of a discrete column. Empty input is a domain
// error.
double entropy(std::span<const int> symbols);

// Equal-frequency discretization into at most `bins` symbols; columns with
// few distinct values map each value to its own symbol.
std::vector<int> quantile_bin(std::span<const double> values, int bins);

// Per-feature information gain IG(y, X_j) = H(y) + H(X_j) - H(y, X_j) over
// the binned feature and the label.
std::vector<double> information_gain(const Dataset& data, int bins);

struct IgOptions {
    int bins = 10;
};
// Retains features whose gain is strictly greater than the mean gain.
SelectionResult ig_select(const Dataset& train, const IgOptions& options = {});

struct LassoSelectOptions {
    double threshold = 1e-4; // retain |beta_j| >= threshold
    LassoOptions lasso;
};
SelectionResult lasso_select(const Dataset& train, const LassoSelectOptions& options,
                             std::uint64_t seed);

struct RfSelectOptions {
    ForestOptions forest;
};
// Retains features whose normalized importance is strictly greater than the
// mean importance (= 1/p).
SelectionResult rf_select(const Dataset& train, const RfSelectOptions& options,
                          std::uint64_t seed);

SelectionResult no_selection(const Dataset& train);

SelectionResult select_features(SelectorKind kind, const Dataset& train, const IgOptions& ig,
                                const LassoSelectOptions& lasso, const RfSelectOptions& rf,
                                std::uint64_t seed);

} // namespace websift
