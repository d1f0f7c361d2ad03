#pragma once

#include "websift/dataset.hpp"
#include "websift/standardize.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace websift {

struct LassoOptions {
    std::vector<double> lambda_grid; // empty = automatic path from lambda_max
    int grid_size = 20;
    double grid_ratio = 1e-3; // lambda_min = lambda_max * grid_ratio
    int inner_folds = 5;
    double tol = 1e-6; // max coefficient change per sweep
    int max_outer = 200;
    int max_inner = 200;
};

// L1-penalized logistic regression fit by IRLS with cyclic coordinate
// descent and soft-thresholding. Coefficients live on the standardized
// feature scale; the fitted standardizer is kept for scoring.
struct LassoModel {
    std::vector<double> beta; // standardized scale
    double intercept = 0.0;
    double lambda = 0.0;
    Standardizer standardizer;

    double margin(std::span<const double> row) const;
    double score(std::span<const double> row) const; // logistic(margin)
    std::size_t nonzero_count(double threshold = 0.0) const;
};

// Single-point fit at a fixed lambda (no tuning).
LassoModel fit_lasso_at(const Dataset& train, double lambda, const LassoOptions& options = {});

// Tuned fit: lambda chosen to maximize inner-CV AUC over the grid, final
// model refit on the full training split at the winning lambda.
LassoModel fit_lasso(const Dataset& train, const LassoOptions& options, std::uint64_t seed);

// Largest lambda with an all-zero coefficient vector (standardized scale).
double lasso_lambda_max(const Dataset& train);

// Gradient of the unpenalized mean logistic loss at the model's coefficients,
// on the standardized scale. Used by the subgradient optimality checks.
std::vector<double> lasso_loss_gradient(const LassoModel& model, const Dataset& data);

} // namespace websift
