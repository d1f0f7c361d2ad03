#include "websift/lasso.hpp"

#include "websift/boosting.hpp" // logistic()
#include "websift/errors.hpp"
#include "websift/folds.hpp"
#include "websift/metrics.hpp"
#include "websift/rng.hpp"

#include <algorithm>
#include <cmath>

namespace websift {

namespace {

constexpr double kMinWeight = 1e-5;

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Standardized design matrix view used by the solver.
struct Design {
    std::vector<double> x; // row-major, standardized
    std::span<const int> y;
    std::size_t n = 0, p = 0;

    double at(std::size_t r, std::size_t c) const { return x[r * p + c]; }
};

// One IRLS + coordinate-descent solve at a fixed lambda, warm-started from
// (beta, intercept). Returns the max coefficient change of the last sweep.
void solve_at(const Design& d, double lambda, std::vector<double>& beta, double& intercept,
              const LassoOptions& options) {
    const std::size_t n = d.n, p = d.p;
    std::vector<double> eta(n), w(n), z(n), residual(n);

    for (int outer = 0; outer < options.max_outer; ++outer) {
        // Quadratic approximation at the current iterate.
        for (std::size_t i = 0; i < n; ++i) {
            double e = intercept;
            for (std::size_t j = 0; j < p; ++j) e += d.at(i, j) * beta[j];
            eta[i] = e;
            double prob = logistic(e);
            double wi = std::max(prob * (1.0 - prob), kMinWeight);
            w[i] = wi;
            z[i] = e + (static_cast<double>(d.y[i]) - prob) / wi;
            residual[i] = z[i] - e;
        }
        double w_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) w_sum += w[i];

        std::vector<double> v(p, 0.0); // (1/n) sum w_i x_ij^2
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) v[j] += w[i] * d.at(i, j) * d.at(i, j);
        for (std::size_t j = 0; j < p; ++j) v[j] /= static_cast<double>(n);

        double outer_change = 0.0;
        for (int inner = 0; inner < options.max_inner; ++inner) {
            double sweep_change = 0.0;

            double num = 0.0;
            for (std::size_t i = 0; i < n; ++i) num += w[i] * residual[i];
            double delta0 = num / w_sum;
            intercept += delta0;
            for (std::size_t i = 0; i < n; ++i) residual[i] -= delta0;
            sweep_change = std::max(sweep_change, std::fabs(delta0));

            for (std::size_t j = 0; j < p; ++j) {
                if (v[j] <= 0.0) continue;
                double u = 0.0;
                for (std::size_t i = 0; i < n; ++i) u += w[i] * d.at(i, j) * residual[i];
                u = u / static_cast<double>(n) + v[j] * beta[j];
                double updated = soft_threshold(u, lambda) / v[j];
                double delta = updated - beta[j];
                if (delta != 0.0) {
                    beta[j] = updated;
                    for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * d.at(i, j);
                    sweep_change = std::max(sweep_change, std::fabs(delta));
                }
            }
            outer_change = std::max(outer_change, sweep_change);
            if (sweep_change < options.tol) break;
        }
        if (outer_change < options.tol) break;
    }
}

Design make_design(const Dataset& train, const Standardizer& standardizer) {
    Design d;
    d.n = train.rows();
    d.p = train.cols();
    d.x = standardizer.transform_matrix(train);
    d.y = train.labels;
    return d;
}

double class_prior(std::span<const int> labels) {
    double pos = 0.0;
    for (int y : labels) pos += y;
    return pos / static_cast<double>(labels.size());
}

double lambda_max_of(const Design& d) {
    double prior = std::clamp(class_prior(d.y), 1e-12, 1.0 - 1e-12);
    double best = 0.0;
    for (std::size_t j = 0; j < d.p; ++j) {
        double g = 0.0;
        for (std::size_t i = 0; i < d.n; ++i)
            g += d.at(i, j) * (static_cast<double>(d.y[i]) - prior);
        best = std::max(best, std::fabs(g) / static_cast<double>(d.n));
    }
    return best;
}

std::vector<double> make_grid(double lambda_max, const LassoOptions& options) {
    if (!options.lambda_grid.empty()) {
        std::vector<double> grid = options.lambda_grid;
        std::sort(grid.begin(), grid.end(), std::greater<>());
        return grid;
    }
    std::vector<double> grid;
    int m = std::max(2, options.grid_size);
    double log_max = std::log(std::max(lambda_max, 1e-12));
    double log_min = log_max + std::log(options.grid_ratio);
    for (int i = 0; i < m; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(m - 1);
        grid.push_back(std::exp(log_max + t * (log_min - log_max)));
    }
    return grid;
}

void check_preconditions(const Dataset& train) {
    train.check_finite();
    std::size_t pos = 0;
    for (int y : train.labels) pos += static_cast<std::size_t>(y != 0);
    if (pos < 2 || train.rows() - pos < 2)
        throw DataError("fit_lasso: need at least 2 samples per class");
}

} // namespace

double LassoModel::margin(std::span<const double> row) const {
    double m = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) m += beta[j] * standardizer.apply(j, row[j]);
    return m;
}

double LassoModel::score(std::span<const double> row) const { return logistic(margin(row)); }

std::size_t LassoModel::nonzero_count(double threshold) const {
    std::size_t count = 0;
    for (double b : beta)
        if (std::fabs(b) > threshold) ++count;
    return count;
}

double lasso_lambda_max(const Dataset& train) {
    Standardizer standardizer = Standardizer::fit(train);
    return lambda_max_of(make_design(train, standardizer));
}

LassoModel fit_lasso_at(const Dataset& train, double lambda, const LassoOptions& options) {
    check_preconditions(train);
    LassoModel model;
    model.standardizer = Standardizer::fit(train);
    model.lambda = lambda;
    Design d = make_design(train, model.standardizer);

    double prior = std::clamp(class_prior(d.y), 1e-12, 1.0 - 1e-12);
    model.intercept = std::log(prior / (1.0 - prior));
    model.beta.assign(train.cols(), 0.0);
    solve_at(d, lambda, model.beta, model.intercept, options);
    return model;
}

LassoModel fit_lasso(const Dataset& train, const LassoOptions& options, std::uint64_t seed) {
    check_preconditions(train);

    Standardizer standardizer = Standardizer::fit(train);
    Design full = make_design(train, standardizer);
    std::vector<double> grid = make_grid(lambda_max_of(full), options);

    // Inner CV: warm-started path per fold, fold-wise AUC per grid point.
    std::vector<double> mean_auc(grid.size(), 0.0);
    std::vector<int> auc_counts(grid.size(), 0);
    auto folds = stratified_kfold(train.labels, options.inner_folds,
                                  derive_seed(seed, "lasso-inner-cv"));

    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<int> train_idx = complement_indices(train.rows(), folds[f]);
        Dataset fit_part = train.subset_rows(train_idx);
        Dataset val_part = train.subset_rows(folds[f]);

        Standardizer fold_standardizer = Standardizer::fit(fit_part);
        Design d = make_design(fit_part, fold_standardizer);

        double prior = std::clamp(class_prior(d.y), 1e-12, 1.0 - 1e-12);
        std::vector<double> beta(fit_part.cols(), 0.0);
        double intercept = std::log(prior / (1.0 - prior));

        for (std::size_t g = 0; g < grid.size(); ++g) {
            solve_at(d, grid[g], beta, intercept, options);
            std::vector<double> scores(val_part.rows());
            for (std::size_t r = 0; r < val_part.rows(); ++r) {
                double m = intercept;
                auto row = val_part.row(r);
                for (std::size_t j = 0; j < beta.size(); ++j)
                    if (beta[j] != 0.0) m += beta[j] * fold_standardizer.apply(j, row[j]);
                scores[r] = logistic(m);
            }
            double auc = auc_rank(scores, val_part.labels);
            if (!std::isnan(auc)) {
                mean_auc[g] += auc;
                ++auc_counts[g];
            }
        }
    }
    std::size_t best = 0;
    double best_auc = -1.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double auc = auc_counts[g] > 0 ? mean_auc[g] / auc_counts[g] : 0.0;
        if (auc > best_auc + 1e-12) { // ties keep the larger (sparser) lambda
            best_auc = auc;
            best = g;
        }
    }

    // Refit on the full training split, warm-started down the path.
    LassoModel model;
    model.standardizer = standardizer;
    model.lambda = grid[best];
    double prior = std::clamp(class_prior(full.y), 1e-12, 1.0 - 1e-12);
    model.intercept = std::log(prior / (1.0 - prior));
    model.beta.assign(train.cols(), 0.0);
    for (std::size_t g = 0; g <= best; ++g)
        solve_at(full, grid[g], model.beta, model.intercept, options);
    return model;
}

std::vector<double> lasso_loss_gradient(const LassoModel& model, const Dataset& data) {
    const std::size_t n = data.rows(), p = data.cols();
    std::vector<double> grad(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double prob = model.score(data.row(i));
        double d = prob - static_cast<double>(data.labels[i]);
        auto row = data.row(i);
        for (std::size_t j = 0; j < p; ++j)
            grad[j] += d * model.standardizer.apply(j, row[j]);
    }
    for (double& g : grad) g /= static_cast<double>(n);
    return grad;
}

} // namespace websift
