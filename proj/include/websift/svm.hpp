#pragma once

#include "websift/dataset.hpp"
#include "websift/standardize.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace websift {

struct SvmOptions {
    double cost = 3000.0;
    double gamma = 0.015;
    double tol = 1e-3;     // KKT gap stopping tolerance on the dual
    long max_iter = -1;    // -1 = automatic cap from n
    std::size_t full_kernel_cache_limit = 4000; // precompute K when n <= limit
};

// Soft-margin SVM with an RBF kernel, trained by sequential minimal
// optimization (maximal-violating-pair working set). The ranking score is
// the raw decision value passed through a slope-only logistic calibration
// fitted on training decision values, so score >= 0.5 iff decision >= 0.
struct SvmModel {
    std::vector<std::vector<double>> support_vectors; // standardized rows
    std::vector<double> alpha_y;                      // alpha_i * y_i per support vector
    double bias = 0.0;
    double gamma = 0.015;
    double cost = 3000.0;
    double platt_slope = 1.0;
    Standardizer standardizer;
    bool converged = true;
    double final_gap = 0.0; // KKT gap at termination
    long iterations = 0;

    double decision(std::span<const double> row) const;
    double score(std::span<const double> row) const;
};

SvmModel fit_svm(const Dataset& train, const SvmOptions& options);

} // namespace websift
