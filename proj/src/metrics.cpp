#include "websift/metrics.hpp"

#include "websift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace websift {

Confusion confusion_at(std::span<const double> scores, std::span<const int> labels,
                       double threshold) {
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool predicted = scores[i] >= threshold;
        bool actual = labels[i] != 0;
        if (predicted && actual)
            ++c.tp;
        else if (predicted && !actual)
            ++c.fp;
        else if (!predicted && actual)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

double auc_rank(std::span<const double> scores, std::span<const int> labels) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied scores. Ranks are 1-based; averaged ranks are
    // multiples of 0.5 and therefore exact in doubles.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double n_pos = 0.0, n_neg = 0.0, rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] != 0) {
            n_pos += 1.0;
            rank_sum_pos += rank[k];
        } else {
            n_neg += 1.0;
        }
    }
    if (n_pos == 0.0 || n_neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
    double u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
    return u / (n_pos * n_neg);
}

MetricRecord compute_metrics(std::span<const double> scores, std::span<const int> labels,
                             double threshold) {
    if (scores.size() != labels.size() || scores.empty())
        throw DataError("compute_metrics: scores and labels must be nonempty and equal length");

    MetricRecord m;
    m.confusion = confusion_at(scores, labels, threshold);
    const Confusion& c = m.confusion;

    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (c.tp + c.fp > 0) {
        m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    } else {
        m.precision = 0.0;
        m.degenerate_precision = true;
    }
    m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    m.gmean = std::sqrt(m.precision * m.recall);

    double auc = auc_rank(scores, labels);
    m.auc_defined = !std::isnan(auc);
    m.auc = m.auc_defined ? auc : 0.0;
    return m;
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

} // namespace websift
