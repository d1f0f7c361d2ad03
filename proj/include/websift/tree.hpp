#pragma once

#include "websift/dataset.hpp"
#include "websift/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace websift {

// Flat node storage shared by the classification trees (forest) and the
// gradient trees (boosting). Leaves have feature == -1 and carry `value`
// (class-1 probability, or additive margin contribution).
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> row) const {
        int idx = 0;
        while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
            const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
            idx = row[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                               : node.right;
        }
        return nodes[static_cast<std::size_t>(idx)].value;
    }

    bool is_stump() const { return nodes.size() <= 3; }
};

struct ClassTreeOptions {
    int mtry = -1;        // features sampled per split; -1 = all
    int min_leaf = 1;     // minimum samples per leaf
    int max_depth = -1;   // -1 = unlimited (grow until pure)
};

// Gini-impurity classification tree on the rows listed in `row_indices`
// (duplicates allowed, for bootstrap samples). Splits are `x < threshold`
// with thresholds at midpoints between consecutive distinct values; equal
// gains break toward the lowest feature index, then the lowest threshold.
// `importance`, when non-null, accumulates per-feature weighted impurity
// decrease (n_node/n_root * gain).
DecisionTree build_classification_tree(const Dataset& data, std::span<const int> row_indices,
                                       const ClassTreeOptions& options, Rng& rng,
                                       std::vector<double>* importance = nullptr);

struct GradTreeOptions {
    int max_depth = 6;
    double l2_reg = 1.0;
    int min_leaf = 1;
    int colsample_count = -1; // features sampled per tree; -1 = all
};

// Second-order gradient tree: split gain is the reduction in
// -1/2 * G^2/(H + l2), leaf value is -G/(H + l2). Same tie-breaking as the
// classification tree.
DecisionTree build_gradient_tree(const Dataset& data, std::span<const int> row_indices,
                                 std::span<const double> grad, std::span<const double> hess,
                                 const GradTreeOptions& options, Rng& rng);

// Gini impurity of a binary count pair.
double gini_impurity(double n_pos, double n_neg);

} // namespace websift
