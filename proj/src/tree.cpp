#include "websift/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace websift {

double gini_impurity(double n_pos, double n_neg) {
    double n = n_pos + n_neg;
    if (n <= 0.0) return 0.0;
    double p = n_pos / n;
    return 2.0 * p * (1.0 - p);
}

namespace {

constexpr double kGainEps = 1e-12;

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// Candidate features for one split: either all of them or an mtry-subset.
std::vector<int> candidate_features(std::size_t p, int mtry, Rng& rng) {
    if (mtry < 0 || static_cast<std::size_t>(mtry) >= p) {
        std::vector<int> all(p);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<int> sampled = rng.sample_without_replacement(static_cast<int>(p), mtry);
    std::sort(sampled.begin(), sampled.end());
    return sampled;
}

bool better_split(const SplitChoice& cand, const SplitChoice& best) {
    if (cand.gain > best.gain + kGainEps) return true;
    if (cand.gain < best.gain - kGainEps) return false;
    if (best.feature < 0) return true;
    if (cand.feature != best.feature) return cand.feature < best.feature;
    return cand.threshold < best.threshold;
}

struct ClassTreeBuilder {
    const Dataset& data;
    const ClassTreeOptions& options;
    Rng& rng;
    std::vector<double>* importance;
    double n_root;
    DecisionTree tree;

    // Scratch: (value, label) pairs for the node under consideration.
    std::vector<std::pair<double, int>> scratch;

    int build(std::vector<int>& rows, int depth) {
        double n_pos = 0.0;
        for (int r : rows) n_pos += data.labels[static_cast<std::size_t>(r)];
        double n = static_cast<double>(rows.size());
        double node_impurity = gini_impurity(n_pos, n - n_pos);

        bool leaf = node_impurity == 0.0 || rows.size() < 2 * static_cast<std::size_t>(options.min_leaf) ||
                    (options.max_depth >= 0 && depth >= options.max_depth);

        SplitChoice best;
        if (!leaf) {
            best = find_split(rows, n_pos, node_impurity);
            leaf = best.feature < 0;
        }
        if (leaf) {
            TreeNode node;
            node.value = n > 0.0 ? n_pos / n : 0.0;
            tree.nodes.push_back(node);
            return static_cast<int>(tree.nodes.size()) - 1;
        }

        if (importance != nullptr)
            (*importance)[static_cast<std::size_t>(best.feature)] += (n / n_root) * best.gain;

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            if (data.at(static_cast<std::size_t>(r), static_cast<std::size_t>(best.feature)) <
                best.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        int self = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(self)].feature = best.feature;
        tree.nodes[static_cast<std::size_t>(self)].threshold = best.threshold;
        int left = build(left_rows, depth + 1);
        int right = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    SplitChoice find_split(const std::vector<int>& rows, double total_pos, double node_impurity) {
        SplitChoice best;
        const double n = static_cast<double>(rows.size());
        const double total_neg = n - total_pos;
        const double min_leaf = static_cast<double>(options.min_leaf);

        for (int f : candidate_features(data.cols(), options.mtry, rng)) {
            scratch.clear();
            for (int r : rows)
                scratch.emplace_back(
                    data.at(static_cast<std::size_t>(r), static_cast<std::size_t>(f)),
                    data.labels[static_cast<std::size_t>(r)]);
            std::sort(scratch.begin(), scratch.end());
            if (scratch.front().first == scratch.back().first) continue;

            double left_pos = 0.0, left_n = 0.0;
            for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
                left_pos += scratch[i].second;
                left_n += 1.0;
                if (scratch[i].first == scratch[i + 1].first) continue;
                double right_n = n - left_n;
                if (left_n < min_leaf || right_n < min_leaf) continue;
                double right_pos = total_pos - left_pos;
                double children = (left_n / n) * gini_impurity(left_pos, left_n - left_pos) +
                                  (right_n / n) * gini_impurity(right_pos, right_n - right_pos);
                SplitChoice cand;
                cand.feature = f;
                cand.threshold = 0.5 * (scratch[i].first + scratch[i + 1].first);
                cand.gain = node_impurity - children;
                if (cand.gain > kGainEps && better_split(cand, best)) best = cand;
            }
        }
        (void)total_neg;
        return best;
    }
};

struct GradTreeBuilder {
    const Dataset& data;
    std::span<const double> grad;
    std::span<const double> hess;
    const GradTreeOptions& options;
    std::vector<int> features; // candidate set fixed per tree
    DecisionTree tree;

    std::vector<std::pair<double, int>> scratch;

    static double leaf_objective(double g, double h, double l2) {
        return -0.5 * g * g / (h + l2);
    }

    int build(std::vector<int>& rows, int depth) {
        double g_sum = 0.0, h_sum = 0.0;
        for (int r : rows) {
            g_sum += grad[static_cast<std::size_t>(r)];
            h_sum += hess[static_cast<std::size_t>(r)];
        }

        bool leaf = rows.size() < 2 * static_cast<std::size_t>(options.min_leaf) ||
                    depth >= options.max_depth;
        SplitChoice best;
        if (!leaf) {
            best = find_split(rows, g_sum, h_sum);
            leaf = best.feature < 0;
        }
        if (leaf) {
            TreeNode node;
            node.value = -g_sum / (h_sum + options.l2_reg);
            tree.nodes.push_back(node);
            return static_cast<int>(tree.nodes.size()) - 1;
        }

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            if (data.at(static_cast<std::size_t>(r), static_cast<std::size_t>(best.feature)) <
                best.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        int self = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(self)].feature = best.feature;
        tree.nodes[static_cast<std::size_t>(self)].threshold = best.threshold;
        int left = build(left_rows, depth + 1);
        int right = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    SplitChoice find_split(const std::vector<int>& rows, double g_total, double h_total) {
        SplitChoice best;
        const double l2 = options.l2_reg;
        const double parent_obj = leaf_objective(g_total, h_total, l2);
        const double min_leaf = static_cast<double>(options.min_leaf);

        for (int f : features) {
            scratch.clear();
            for (int r : rows)
                scratch.emplace_back(
                    data.at(static_cast<std::size_t>(r), static_cast<std::size_t>(f)), r);
            std::sort(scratch.begin(), scratch.end());
            if (scratch.front().first == scratch.back().first) continue;

            double g_left = 0.0, h_left = 0.0, n_left = 0.0;
            for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
                int r = scratch[i].second;
                g_left += grad[static_cast<std::size_t>(r)];
                h_left += hess[static_cast<std::size_t>(r)];
                n_left += 1.0;
                if (scratch[i].first == scratch[i + 1].first) continue;
                double n_right = static_cast<double>(rows.size()) - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                double gain = parent_obj - leaf_objective(g_left, h_left, l2) -
                              leaf_objective(g_total - g_left, h_total - h_left, l2);
                SplitChoice cand;
                cand.feature = f;
                cand.threshold = 0.5 * (scratch[i].first + scratch[i + 1].first);
                cand.gain = gain;
                if (cand.gain > kGainEps && better_split(cand, best)) best = cand;
            }
        }
        return best;
    }
};

} // namespace

DecisionTree build_classification_tree(const Dataset& data, std::span<const int> row_indices,
                                       const ClassTreeOptions& options, Rng& rng,
                                       std::vector<double>* importance) {
    ClassTreeBuilder builder{data, options, rng, importance,
                             static_cast<double>(row_indices.size()), DecisionTree{}, {}};
    std::vector<int> rows(row_indices.begin(), row_indices.end());
    builder.build(rows, 0);
    return std::move(builder.tree);
}

DecisionTree build_gradient_tree(const Dataset& data, std::span<const int> row_indices,
                                 std::span<const double> grad, std::span<const double> hess,
                                 const GradTreeOptions& options, Rng& rng) {
    GradTreeBuilder builder{data, grad, hess, options, {}, DecisionTree{}, {}};
    if (options.colsample_count > 0 &&
        static_cast<std::size_t>(options.colsample_count) < data.cols()) {
        builder.features =
            rng.sample_without_replacement(static_cast<int>(data.cols()), options.colsample_count);
        std::sort(builder.features.begin(), builder.features.end());
    } else {
        builder.features.resize(data.cols());
        std::iota(builder.features.begin(), builder.features.end(), 0);
    }
    std::vector<int> rows(row_indices.begin(), row_indices.end());
    builder.build(rows, 0);
    return std::move(builder.tree);
}

} // namespace websift
