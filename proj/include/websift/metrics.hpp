#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace websift {

struct Confusion {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

// Scores >= threshold predict the positive class.
Confusion confusion_at(std::span<const double> scores, std::span<const int> labels,
                       double threshold = 0.5);

struct MetricRecord {
    Confusion confusion;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double gmean = 0.0; // sqrt(precision * recall)
    double auc = 0.0;
    bool auc_defined = false;          // false on a single-class fold
    bool degenerate_precision = false; // no predicted positives; precision reported as 0
};

// Threshold metrics from the confusion matrix plus rank-based AUC.
MetricRecord compute_metrics(std::span<const double> scores, std::span<const int> labels,
                             double threshold = 0.5);

// Mann-Whitney rank-statistic AUC; ties contribute 1/2. Returns NaN when a
// class is absent.
double auc_rank(std::span<const double> scores, std::span<const int> labels);

double mean(std::span<const double> values);
double sample_stddev(std::span<const double> values); // n-1 denominator; 0 for n < 2

} // namespace websift
