#include "websift/forest.hpp"

#include "websift/errors.hpp"
#include "websift/parallel.hpp"
#include "websift/rng.hpp"

#include <algorithm>
#include <cmath>

namespace websift {

double ForestModel::score(std::span<const double> row) const {
    if (trees.empty()) return 0.5;
    double sum = 0.0;
    for (std::size_t i = 0; i < trees.size(); ++i) sum += weights[i] * trees[i].predict(row);
    // The weighted mean is a probability up to summation rounding.
    return std::clamp(sum / static_cast<double>(trees.size()), 0.0, 1.0);
}

double ForestModel::score_unweighted(std::span<const double> row) const {
    if (trees.empty()) return 0.5;
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.predict(row);
    return std::clamp(sum / static_cast<double>(trees.size()), 0.0, 1.0);
}

ForestModel fit_forest(const Dataset& train, const ForestOptions& options, std::uint64_t seed) {
    if (options.n_trees < 1) throw DataError("fit_forest: n_trees must be >= 1");
    if (train.rows() == 0) throw DataError("fit_forest: empty training data");
    train.check_finite();

    const std::size_t n = train.rows();
    const std::size_t p = train.cols();
    const int n_trees = options.n_trees;

    ForestModel model;
    model.options = options;
    model.trees.resize(static_cast<std::size_t>(n_trees));
    model.oob_accuracy.assign(static_cast<std::size_t>(n_trees), 1.0);

    bool all_pos = std::all_of(train.labels.begin(), train.labels.end(),
                               [](int y) { return y != 0; });
    bool all_neg = std::all_of(train.labels.begin(), train.labels.end(),
                               [](int y) { return y == 0; });
    model.degenerate = all_pos || all_neg;

    ClassTreeOptions tree_options;
    tree_options.mtry = std::min<int>(options.mtry, static_cast<int>(p));
    tree_options.min_leaf = options.min_leaf;
    tree_options.max_depth = options.max_depth;

    std::vector<std::vector<double>> per_tree_importance(
        static_cast<std::size_t>(n_trees), std::vector<double>(p, 0.0));

    parallel_for(static_cast<std::size_t>(n_trees), options.jobs, [&](std::size_t t) {
        Rng rng(derive_seed(seed, "forest-tree", t));
        std::vector<int> bootstrap(n);
        std::vector<std::uint8_t> in_bag(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            int r = rng.below_int(static_cast<int>(n));
            bootstrap[i] = r;
            in_bag[static_cast<std::size_t>(r)] = 1;
        }
        model.trees[t] =
            build_classification_tree(train, bootstrap, tree_options, rng, &per_tree_importance[t]);

        // Out-of-bag accuracy at the 0.5 threshold; trees with an empty OOB
        // set keep a neutral weight of 1.
        std::size_t oob_total = 0, oob_correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (in_bag[i]) continue;
            ++oob_total;
            int predicted = model.trees[t].predict(train.row(i)) >= 0.5 ? 1 : 0;
            if (predicted == train.labels[i]) ++oob_correct;
        }
        if (oob_total > 0)
            model.oob_accuracy[t] =
                static_cast<double>(oob_correct) / static_cast<double>(oob_total);
    });

    model.weights.assign(static_cast<std::size_t>(n_trees), 1.0);
    if (options.oob_weighting) {
        double total = 0.0;
        for (double w : model.oob_accuracy) total += w;
        if (total > 0.0) {
            for (int t = 0; t < n_trees; ++t)
                model.weights[static_cast<std::size_t>(t)] =
                    model.oob_accuracy[static_cast<std::size_t>(t)] *
                    static_cast<double>(n_trees) / total;
        }
    }

    model.importances.assign(p, 0.0);
    for (const auto& imp : per_tree_importance)
        for (std::size_t c = 0; c < p; ++c) model.importances[c] += imp[c];
    double imp_total = 0.0;
    for (double v : model.importances) imp_total += v;
    if (imp_total > 0.0) {
        for (double& v : model.importances) v /= imp_total;
    } else if (p > 0) {
        for (double& v : model.importances) v = 1.0 / static_cast<double>(p);
    }
    return model;
}

} // namespace websift
