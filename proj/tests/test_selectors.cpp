#include <doctest.h>

#include "websift/errors.hpp"
#include "websift/rng.hpp"
#include "websift/selectors.hpp"

#include <cmath>
#include <map>
#include <vector>

using namespace websift;

namespace {

// Direct-summation oracle over explicit probability tables.
double entropy_oracle(const std::vector<int>& values) {
    std::map<int, double> counts;
    for (int v : values) counts[v] += 1.0;
    double n = static_cast<double>(values.size());
    double h = 0.0;
    for (const auto& [v, c] : counts) h -= (c / n) * std::log2(c / n);
    return h;
}

// Conditional-entropy route: IG = H(y) - H(y | X).
double ig_conditional_oracle(const std::vector<int>& y, const std::vector<int>& x) {
    double h_y = entropy_oracle(y);
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < x.size(); ++i) groups[x[i]].push_back(y[i]);
    double h_cond = 0.0;
    for (const auto& [value, ys] : groups)
        h_cond += (static_cast<double>(ys.size()) / static_cast<double>(y.size())) *
                  entropy_oracle(ys);
    return h_y - h_cond;
}

Dataset make_dataset(const std::vector<std::vector<double>>& cols, const std::vector<int>& labels) {
    Dataset d;
    for (std::size_t c = 0; c < cols.size(); ++c) d.columns.push_back("f" + std::to_string(c));
    for (std::size_t r = 0; r < labels.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) d.values.push_back(cols[c][r]);
        d.labels.push_back(labels[r]);
    }
    return d;
}

} // namespace

TEST_CASE("entropy basics") {
    CHECK(entropy(std::vector<int>{5, 5, 5, 5}) == 0.0);
    CHECK(entropy(std::vector<int>{0, 1, 0, 1}) == 1.0);

    // counts {3,1}: H = -(0.75 log2 0.75 + 0.25 log2 0.25)
    std::vector<int> skewed = {1, 1, 1, 0};
    double expected = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
    CHECK(entropy(skewed) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::fabs(entropy(skewed) - 0.8113) < 1e-4);
    CHECK(entropy(skewed) == doctest::Approx(entropy_oracle(skewed)).epsilon(1e-15));

    CHECK_THROWS_AS(entropy(std::vector<int>{}), DataError);
}

TEST_CASE("quantile binning") {
    SUBCASE("few distinct values map one symbol per value") {
        std::vector<double> v = {0, 1, 1, 0, 2};
        auto bins = quantile_bin(v, 10);
        CHECK(bins == std::vector<int>{0, 1, 1, 0, 2});
    }
    SUBCASE("continuous values spread over the requested bins") {
        Rng rng(5);
        std::vector<double> v(1000);
        for (auto& x : v) x = rng.uniform();
        auto bins = quantile_bin(v, 10);
        std::map<int, int> counts;
        for (int b : bins) ++counts[b];
        CHECK(counts.size() == 10);
        for (const auto& [b, c] : counts) {
            CHECK(c > 60);
            CHECK(c < 140);
        }
    }
    SUBCASE("heavy ties collapse bins instead of splitting a value") {
        std::vector<double> v(100, 0.0);
        for (int i = 0; i < 10; ++i) v[static_cast<std::size_t>(i)] = 1.0 + i;
        auto bins = quantile_bin(v, 4);
        for (std::size_t i = 10; i < 100; ++i) CHECK(bins[i] == bins[99]);
    }
}

TEST_CASE("information gain follows the entropy identity") {
    SUBCASE("feature identical to the label gains H(y)") {
        std::vector<int> labels = {0, 0, 0, 1, 1, 1, 1, 1};
        std::vector<double> col(labels.begin(), labels.end());
        Dataset d = make_dataset({col}, labels);
        auto gains = information_gain(d, 10);
        CHECK(gains[0] == doctest::Approx(entropy_oracle(labels)).epsilon(1e-12));
    }
    SUBCASE("independent feature on a product-distribution table gains zero") {
        // 4-row exhaustive product table: (y, x) in {0,1}^2, each once.
        Dataset d = make_dataset({{0, 1, 0, 1}}, {0, 0, 1, 1});
        auto gains = information_gain(d, 10);
        CHECK(std::fabs(gains[0]) <= 1e-12);
    }
    SUBCASE("constant column gains zero without error") {
        Dataset d = make_dataset({{3, 3, 3, 3}}, {0, 1, 0, 1});
        auto gains = information_gain(d, 10);
        CHECK(gains[0] == 0.0);
    }
}

TEST_CASE("IG matches the conditional-entropy oracle within 1e-9") {
    Rng rng(2718);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 30 + rng.below(200);
        std::vector<int> labels(n);
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = rng.bernoulli(0.4) ? 1 : 0;
            col[i] = static_cast<double>(rng.below(6)); // discrete, no binning loss
        }
        Dataset d = make_dataset({col}, labels);
        auto gains = information_gain(d, 10);

        std::vector<int> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<int>(col[i]);
        double expected = ig_conditional_oracle(labels, x);
        CHECK(std::fabs(gains[0] - expected) < 1e-9);

        // Bounds: 0 <= IG <= min(H(y), H(X)).
        double h_y = entropy_oracle(labels);
        double h_x = entropy_oracle(x);
        CHECK(gains[0] >= -1e-12);
        CHECK(gains[0] <= std::min(h_y, h_x) + 1e-12);
    }
}

TEST_CASE("ig_select keeps features strictly above the mean gain") {
    Rng rng(13);
    std::size_t n = 400;
    std::vector<int> labels(n);
    std::vector<double> signal(n), noise1(n), noise2(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = rng.bernoulli(0.5) ? 1 : 0;
        signal[i] = labels[i] + 0.05 * rng.normal();
        noise1[i] = rng.uniform();
        noise2[i] = rng.uniform();
    }
    Dataset d = make_dataset({signal, noise1, noise2}, labels);
    SelectionResult result = ig_select(d, {10});
    CHECK(result.mask[0] == 1);
    CHECK(result.mask[1] == 0);
    CHECK(result.mask[2] == 0);
    CHECK_FALSE(result.fallback_applied);
    CHECK(result.retained_count() >= 1);
}

TEST_CASE("lasso selection rule is >= on the threshold boundary") {
    Rng rng(77);
    std::size_t n = 120;
    std::vector<int> labels(n);
    std::vector<double> strong(n), weak(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = rng.bernoulli(0.5) ? 1 : 0;
        strong[i] = labels[i] * 2.0 + rng.normal() * 0.3;
        weak[i] = rng.normal();
    }
    Dataset d = make_dataset({strong, weak}, labels);

    LassoSelectOptions options;
    SelectionResult r = lasso_select(d, options, 42);
    REQUIRE(r.scores.size() == 2);
    CHECK(r.mask[0] == 1);

    // Boundary semantics: a threshold exactly equal to |beta_j| retains j.
    double beta0 = r.scores[0].score;
    LassoSelectOptions at_boundary;
    at_boundary.threshold = beta0;
    SelectionResult boundary = lasso_select(d, at_boundary, 42);
    CHECK(boundary.mask[0] == 1);

    LassoSelectOptions above;
    above.threshold = std::nextafter(beta0, 1e9);
    SelectionResult excluded = lasso_select(d, above, 42);
    CHECK(excluded.scores[0].retained == false);
}

TEST_CASE("rf importance selection") {
    SUBCASE("uniform importances from unsplittable data retain nothing raw, fall back to top-1") {
        Dataset d = make_dataset({{1, 1, 1, 1, 1, 1}, {2, 2, 2, 2, 2, 2}, {3, 3, 3, 3, 3, 3}},
                                 {0, 1, 0, 1, 0, 1});
        RfSelectOptions options;
        options.forest.n_trees = 10;
        SelectionResult r = rf_select(d, options, 9);
        for (const auto& s : r.scores) CHECK_FALSE(s.retained);
        CHECK(r.fallback_applied);
        CHECK(r.retained_count() == 1);
    }
    SUBCASE("a single dominant feature outranks noise and is retained") {
        Rng rng(4242);
        std::size_t n = 300;
        std::vector<int> labels(n);
        std::vector<double> x1(n), x2(n), x3(n);
        for (std::size_t i = 0; i < n; ++i) {
            x1[i] = rng.uniform();
            labels[i] = x1[i] > 0.55 ? 1 : 0;
            x2[i] = rng.uniform();
            x3[i] = rng.uniform();
        }
        Dataset d = make_dataset({x1, x2, x3}, labels);
        RfSelectOptions options;
        options.forest.n_trees = 50;
        options.forest.mtry = 2;
        SelectionResult r = rf_select(d, options, 31);
        CHECK(r.scores[0].score > r.scores[1].score);
        CHECK(r.scores[0].score > r.scores[2].score);
        CHECK(r.mask[0] == 1);
        CHECK_FALSE(r.fallback_applied);
    }
}

TEST_CASE("selection results serialize with names, scores and masks") {
    Dataset d = make_dataset({{0, 1, 0, 1}, {1, 1, 0, 0}}, {0, 1, 0, 1});
    SelectionResult r = no_selection(d);
    CHECK(r.retained_count() == 2);
    std::string json = r.to_json_string();
    CHECK(json.find("\"f0\"") != std::string::npos);
    CHECK(json.find("\"retained\": true") != std::string::npos);
}
