#pragma once

#include "websift/dataset.hpp"
#include "websift/standardize.hpp"

#include <span>
#include <vector>

namespace websift {

// k-nearest neighbours on standardized features, Euclidean distance.
// Distance ties break toward the lowest training-row index. The score is the
// positive fraction among the k nearest.
struct KnnModel {
    int k = 10;
    Standardizer standardizer;
    std::vector<double> reference; // row-major, standardized
    std::vector<int> labels;
    std::size_t p = 0;

    std::size_t n_train() const { return labels.size(); }
    double score(std::span<const double> row) const;
};

KnnModel fit_knn(const Dataset& train, int k);

} // namespace websift
