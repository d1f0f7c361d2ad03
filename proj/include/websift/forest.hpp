#pragma once

#include "websift/dataset.hpp"
#include "websift/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace websift {

struct ForestOptions {
    int n_trees = 500;
    int mtry = 50; // clamped to the feature count at fit time
    int min_leaf = 1;
    int max_depth = -1;
    bool oob_weighting = true; // weigh trees by out-of-bag accuracy
    int jobs = 1;
};

// Bagged Gini trees. Each tree's prediction is weighted by its out-of-bag
// accuracy; weights are renormalized to mean 1 so the weighted average stays
// a probability.
struct ForestModel {
    std::vector<DecisionTree> trees;
    std::vector<double> weights;      // renormalized, mean 1
    std::vector<double> oob_accuracy; // raw per-tree OOB accuracy
    std::vector<double> importances;  // mean impurity decrease, sums to 1
    ForestOptions options;
    bool degenerate = false; // single-class training data

    double score(std::span<const double> row) const;
    double score_unweighted(std::span<const double> row) const;
};

ForestModel fit_forest(const Dataset& train, const ForestOptions& options, std::uint64_t seed);

} // namespace websift
