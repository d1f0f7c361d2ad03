#pragma once

#include "websift/dataset.hpp"
#include "websift/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace websift {

struct BoostOptions {
    int n_learners = 200;
    int max_depth = 6;
    double learning_rate = 0.3;
    double l2_reg = 1.0;
    double subsample = 1.0;  // row fraction per stage
    double colsample = 1.0;  // feature fraction per stage
    int min_leaf = 1;
};

// Stage-wise boosted trees on second-order logistic gradients. Shrinkage is
// folded into the stored leaf values, so the raw margin is the base margin
// plus the plain sum of tree outputs.
struct BoostModel {
    double base_margin = 0.0; // log-odds of the class prior
    std::vector<DecisionTree> trees;
    std::vector<double> train_loss; // mean logistic loss after each stage
    BoostOptions options;

    double margin(std::span<const double> row) const;
    double score(std::span<const double> row) const; // logistic(margin)
};

BoostModel fit_boost(const Dataset& train, const BoostOptions& options, std::uint64_t seed);

double logistic(double x);

} // namespace websift
