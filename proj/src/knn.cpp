#include "websift/knn.hpp"

#include "websift/errors.hpp"

#include <algorithm>
#include <cmath>

namespace websift {

KnnModel fit_knn(const Dataset& train, int k) {
    if (k <= 0) throw DataError("fit_knn: k must be positive");
    if (static_cast<std::size_t>(k) > train.rows())
        throw DataError("fit_knn: k exceeds the number of training samples");
    train.check_finite();

    KnnModel model;
    model.k = k;
    model.p = train.cols();
    model.standardizer = Standardizer::fit(train);
    model.reference = model.standardizer.transform_matrix(train);
    model.labels = train.labels;
    return model;
}

double KnnModel::score(std::span<const double> row) const {
    std::vector<double> q = standardizer.transform_row(row);
    const std::size_t n = n_train();

    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        const double* ref = reference.data() + i * p;
        for (std::size_t j = 0; j < p; ++j) {
            double d = q[j] - ref[j];
            d2 += d * d;
        }
        dist[i] = {d2, i};
    }
    std::size_t kk = static_cast<std::size_t>(k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());

    double positives = 0.0;
    for (std::size_t i = 0; i < kk; ++i) positives += labels[dist[i].second];
    return positives / static_cast<double>(kk);
}

} // namespace websift
