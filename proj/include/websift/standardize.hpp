#pragma once

#include "websift/dataset.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace websift {

// Per-feature zero-mean / unit-variance transform. Statistics always come
// from training data; models store the fitted transform for scoring time.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale; // 1.0 for constant columns

    static Standardizer fit(const Dataset& data) {
        Standardizer s;
        const std::size_t p = data.cols(), n = data.rows();
        s.mean.assign(p, 0.0);
        s.scale.assign(p, 1.0);
        if (n == 0) return s;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < p; ++c) s.mean[c] += data.at(r, c);
        for (std::size_t c = 0; c < p; ++c) s.mean[c] /= static_cast<double>(n);
        std::vector<double> ss(p, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < p; ++c) {
                double d = data.at(r, c) - s.mean[c];
                ss[c] += d * d;
            }
        for (std::size_t c = 0; c < p; ++c) {
            double sd = std::sqrt(ss[c] / static_cast<double>(n));
            s.scale[c] = sd > 0.0 ? sd : 1.0;
        }
        return s;
    }

    double apply(std::size_t c, double x) const { return (x - mean[c]) / scale[c]; }

    std::vector<double> transform_row(std::span<const double> row) const {
        std::vector<double> out(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) out[c] = apply(c, row[c]);
        return out;
    }

    std::vector<double> transform_matrix(const Dataset& data) const {
        std::vector<double> out(data.values.size());
        const std::size_t p = data.cols();
        for (std::size_t r = 0; r < data.rows(); ++r)
            for (std::size_t c = 0; c < p; ++c) out[r * p + c] = apply(c, data.at(r, c));
        return out;
    }
};

} // namespace websift
