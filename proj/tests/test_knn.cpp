#include <doctest.h>

#include "websift/errors.hpp"
#include "websift/knn.hpp"
#include "websift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace websift;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
    Dataset d;
    for (std::size_t c = 0; c < rows[0].size(); ++c) d.columns.push_back("f" + std::to_string(c));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        d.values.insert(d.values.end(), rows[r].begin(), rows[r].end());
        d.labels.push_back(labels[r]);
    }
    return d;
}

// Exhaustive all-pairs oracle with the same standardization and the same
// (distance, index) tie-breaking.
double knn_oracle(const Dataset& train, std::span<const double> query, int k) {
    Standardizer s = Standardizer::fit(train);
    std::vector<double> q = s.transform_row(query);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < train.rows(); ++i) {
        std::vector<double> row = s.transform_row(train.row(i));
        double d2 = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) d2 += (q[j] - row[j]) * (q[j] - row[j]);
        dist.push_back({d2, i});
    }
    std::sort(dist.begin(), dist.end());
    double pos = 0.0;
    for (int i = 0; i < k; ++i) pos += train.labels[dist[static_cast<std::size_t>(i)].second];
    return pos / k;
}

} // namespace

TEST_CASE("parameter validation") {
    Dataset d = make_dataset({{0, 0}, {1, 1}}, {0, 1});
    CHECK_THROWS_AS(fit_knn(d, 0), DataError);
    CHECK_THROWS_AS(fit_knn(d, -3), DataError);
    CHECK_THROWS_AS(fit_knn(d, 3), DataError); // k > n_train
}

TEST_CASE("query equal to a training point with k=1 returns that label") {
    Dataset d = make_dataset({{0, 0}, {5, 5}, {9, 1}}, {0, 1, 0});
    KnnModel model = fit_knn(d, 1);
    CHECK(model.score(std::vector<double>{5, 5}) == 1.0);
    CHECK(model.score(std::vector<double>{0, 0}) == 0.0);
}

TEST_CASE("k = n_train returns the global positive fraction everywhere") {
    Dataset d = make_dataset({{0, 0}, {1, 0}, {2, 3}, {9, 9}, {4, 4}}, {1, 0, 1, 0, 1});
    KnnModel model = fit_knn(d, 5);
    CHECK(model.score(std::vector<double>{100, -7}) == doctest::Approx(0.6));
    CHECK(model.score(std::vector<double>{0, 0}) == doctest::Approx(0.6));
}

TEST_CASE("five-point planted fixture matches the exhaustive oracle at k=3") {
    Dataset d = make_dataset({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}}, {0, 0, 1, 1, 1});
    KnnModel model = fit_knn(d, 3);
    std::vector<std::vector<double>> queries = {{0, 0}, {1, 1}, {5, 5}, {3, 3}, {-2, 0}};
    for (const auto& q : queries) CHECK(model.score(q) == knn_oracle(d, q, 3));
}

TEST_CASE("random fixtures match the oracle including distance ties") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 10 + rng.below(40);
        std::vector<std::vector<double>> rows(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Integer grid coordinates force exact distance ties.
            rows[i] = {static_cast<double>(rng.below(5)), static_cast<double>(rng.below(5))};
            labels[i] = rng.bernoulli(0.5) ? 1 : 0;
        }
        Dataset d = make_dataset(rows, labels);
        int k = 1 + rng.below_int(static_cast<int>(n));
        KnnModel model = fit_knn(d, k);
        for (int q = 0; q < 5; ++q) {
            std::vector<double> query = {static_cast<double>(rng.below(5)),
                                         static_cast<double>(rng.below(5))};
            CHECK(model.score(query) == knn_oracle(d, query, k));
        }
    }
}

TEST_CASE("scores are multiples of 1/k in [0,1]") {
    Dataset d = make_dataset({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}, {2, 2}}, {0, 0, 1, 1, 1, 0});
    KnnModel model = fit_knn(d, 4);
    Rng rng(3);
    for (int q = 0; q < 20; ++q) {
        std::vector<double> query = {rng.uniform(-1, 7), rng.uniform(-1, 7)};
        double s = model.score(query);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        double scaled = s * 4.0;
        CHECK(scaled == std::round(scaled));
    }
}
