#include "websift/boosting.hpp"

#include "websift/errors.hpp"
#include "websift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace websift {

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

// Mean logistic loss of margins against 0/1 labels, numerically stable.
double mean_log_loss(std::span<const double> margins, std::span<const int> labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        double m = margins[i];
        // log(1 + exp(-z)) with z = y_pm * m
        double z = labels[i] != 0 ? m : -m;
        loss += z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    }
    return loss / static_cast<double>(margins.size());
}

void scale_leaves(DecisionTree& tree, double factor) {
    for (auto& node : tree.nodes)
        if (node.feature < 0) node.value *= factor;
}

} // namespace

double BoostModel::margin(std::span<const double> row) const {
    double m = base_margin;
    for (const auto& tree : trees) m += tree.predict(row);
    return m;
}

double BoostModel::score(std::span<const double> row) const { return logistic(margin(row)); }

BoostModel fit_boost(const Dataset& train, const BoostOptions& options, std::uint64_t seed) {
    if (options.n_learners < 0) throw DataError("fit_boost: n_learners must be >= 0");
    if (train.rows() == 0) throw DataError("fit_boost: empty training data");
    train.check_finite();

    const std::size_t n = train.rows();
    const std::size_t p = train.cols();

    BoostModel model;
    model.options = options;

    double pos = 0.0;
    for (int y : train.labels) pos += y;
    double prior = pos / static_cast<double>(n);
    prior = std::clamp(prior, 1e-9, 1.0 - 1e-9);
    model.base_margin = std::log(prior / (1.0 - prior));

    std::vector<double> margins(n, model.base_margin);
    std::vector<double> grad(n), hess(n);
    double prev_loss = mean_log_loss(margins, train.labels);

    GradTreeOptions tree_options;
    tree_options.max_depth = options.max_depth;
    tree_options.l2_reg = options.l2_reg;
    tree_options.min_leaf = options.min_leaf;
    if (options.colsample < 1.0)
        tree_options.colsample_count = std::max(
            1, static_cast<int>(std::floor(options.colsample * static_cast<double>(p))));

    for (int stage = 0; stage < options.n_learners; ++stage) {
        for (std::size_t i = 0; i < n; ++i) {
            double prob = logistic(margins[i]);
            grad[i] = prob - static_cast<double>(train.labels[i]);
            hess[i] = prob * (1.0 - prob);
            if (!std::isfinite(grad[i]) || !std::isfinite(hess[i]))
                throw DataError("fit_boost: non-finite gradient at stage " +
                                std::to_string(stage));
        }

        Rng rng(derive_seed(seed, "boost-stage", static_cast<std::uint64_t>(stage)));
        std::vector<int> rows;
        if (options.subsample < 1.0) {
            int take = std::max(
                1, static_cast<int>(std::floor(options.subsample * static_cast<double>(n))));
            rows = rng.sample_without_replacement(static_cast<int>(n), take);
            std::sort(rows.begin(), rows.end());
        } else {
            rows.resize(n);
            std::iota(rows.begin(), rows.end(), 0);
        }

        DecisionTree tree = build_gradient_tree(train, rows, grad, hess, tree_options, rng);
        scale_leaves(tree, options.learning_rate);

        // Backtracking on the stage step keeps the training loss monotone
        // non-increasing even when the quadratic approximation overshoots.
        std::vector<double> updated(n);
        double factor = 1.0;
        double new_loss = prev_loss;
        bool accepted = false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (std::size_t i = 0; i < n; ++i)
                updated[i] = margins[i] + factor * tree.predict(train.row(i));
            new_loss = mean_log_loss(updated, train.labels);
            if (new_loss <= prev_loss + 1e-12) {
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if (!accepted) break; // no descent direction left; stop early

        if (factor != 1.0) scale_leaves(tree, factor);
        margins.swap(updated);
        prev_loss = new_loss;
        model.trees.push_back(std::move(tree));
        model.train_loss.push_back(new_loss);
    }
    return model;
}

} // namespace websift
