#include "websift/svm.hpp"

#include "websift/boosting.hpp" // logistic()
#include "websift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <list>
#include <unordered_map>

namespace websift {

namespace {

constexpr double kTau = 1e-12;

// RBF kernel rows over the standardized training matrix, either fully
// precomputed (small n) or served from an LRU row cache.
class KernelCache {
public:
    KernelCache(const std::vector<double>& x, std::size_t n, std::size_t p, double gamma,
                std::size_t full_limit)
        : x_(x), n_(n), p_(p), gamma_(gamma) {
        norms_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            const double* row = x_.data() + i * p_;
            for (std::size_t j = 0; j < p_; ++j) s += row[j] * row[j];
            norms_[i] = s;
        }
        if (n_ <= full_limit) {
            full_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j <= i; ++j) {
                    double k = kernel(i, j);
                    full_[i * n_ + j] = k;
                    full_[j * n_ + i] = k;
                }
        } else {
            max_cached_rows_ = std::max<std::size_t>(2, (256u << 20) / (n_ * sizeof(double)));
        }
    }

    const double* row(std::size_t i) {
        if (!full_.empty()) return full_.data() + i * n_;
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first.data();
        }
        if (cache_.size() >= max_cached_rows_) {
            cache_.erase(lru_.back());
            lru_.pop_back();
        }
        std::vector<double> values(n_);
        for (std::size_t j = 0; j < n_; ++j) values[j] = kernel(i, j);
        lru_.push_front(i);
        auto [pos, inserted] =
            cache_.emplace(i, std::make_pair(std::move(values), lru_.begin()));
        return pos->second.first.data();
    }

private:
    double kernel(std::size_t i, std::size_t j) const {
        double dot = 0.0;
        const double* a = x_.data() + i * p_;
        const double* b = x_.data() + j * p_;
        for (std::size_t k = 0; k < p_; ++k) dot += a[k] * b[k];
        double d2 = norms_[i] + norms_[j] - 2.0 * dot;
        return std::exp(-gamma_ * std::max(d2, 0.0));
    }

    const std::vector<double>& x_;
    std::size_t n_, p_;
    double gamma_;
    std::vector<double> norms_;
    std::vector<double> full_;
    std::size_t max_cached_rows_ = 0;
    std::list<std::size_t> lru_;
    std::unordered_map<std::size_t,
                       std::pair<std::vector<double>, std::list<std::size_t>::iterator>>
        cache_;
};

// Slope-only Platt calibration: a > 0 minimizing the mean logistic loss of
// sigma(a * f) against the labels. Keeping the offset at zero preserves the
// margin sign at the 0.5 threshold.
double fit_platt_slope(std::span<const double> decisions, std::span<const int> labels) {
    double a = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        double g = 0.0, h = 0.0;
        for (std::size_t i = 0; i < decisions.size(); ++i) {
            double f = decisions[i];
            double prob = logistic(a * f);
            g += (prob - static_cast<double>(labels[i])) * f;
            h += prob * (1.0 - prob) * f * f;
        }
        g /= static_cast<double>(decisions.size());
        h /= static_cast<double>(decisions.size());
        if (h < 1e-12) break;
        double step = g / h;
        a -= step;
        a = std::clamp(a, 1e-6, 1e6);
        if (std::fabs(step) < 1e-10) break;
    }
    return a;
}

} // namespace

double SvmModel::decision(std::span<const double> row) const {
    std::vector<double> q = standardizer.transform_row(row);
    double sum = bias;
    for (std::size_t s = 0; s < support_vectors.size(); ++s) {
        const auto& sv = support_vectors[s];
        double d2 = 0.0;
        for (std::size_t j = 0; j < sv.size(); ++j) {
            double d = q[j] - sv[j];
            d2 += d * d;
        }
        sum += alpha_y[s] * std::exp(-gamma * d2);
    }
    return sum;
}

double SvmModel::score(std::span<const double> row) const {
    return logistic(platt_slope * decision(row));
}

SvmModel fit_svm(const Dataset& train, const SvmOptions& options) {
    if (train.rows() < 2) throw DataError("fit_svm: need at least 2 training samples");
    train.check_finite();

    const std::size_t n = train.rows();
    const std::size_t p = train.cols();
    const double C = options.cost;

    SvmModel model;
    model.gamma = options.gamma;
    model.cost = options.cost;
    model.standardizer = Standardizer::fit(train);

    std::vector<double> x = model.standardizer.transform_matrix(train);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = train.labels[i] != 0 ? 1.0 : -1.0;

    KernelCache cache(x, n, p, options.gamma, options.full_kernel_cache_limit);

    // Dual: minimize 1/2 a'Qa - e'a, Q_ij = y_i y_j K_ij, 0 <= a <= C, y'a = 0.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // G = Qa - e

    long max_iter = options.max_iter > 0
                        ? options.max_iter
                        : std::max<long>(200000, static_cast<long>(n) * 400);
    double gap = std::numeric_limits<double>::infinity();
    long iter = 0;

    for (; iter < max_iter; ++iter) {
        // Maximal violating pair.
        int i_up = -1, j_low = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            bool in_up = (y[t] > 0.0 && alpha[t] < C) || (y[t] < 0.0 && alpha[t] > 0.0);
            bool in_low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < C);
            if (in_up && v > gmax) {
                gmax = v;
                i_up = static_cast<int>(t);
            }
            if (in_low && v < gmin) {
                gmin = v;
                j_low = static_cast<int>(t);
            }
        }
        gap = gmax - gmin;
        if (gap < options.tol) break;

        std::size_t i = static_cast<std::size_t>(i_up);
        std::size_t j = static_cast<std::size_t>(j_low);
        const double* k_i = cache.row(i);
        const double* k_j = cache.row(j);

        double old_ai = alpha[i], old_aj = alpha[j];
        double quad = k_i[i] + k_j[j] - 2.0 * k_i[j];
        if (quad <= 0.0) quad = kTau;

        if (y[i] != y[j]) {
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > C) {
                alpha[i] = C;
                alpha[j] = C - diff;
            } else if (diff <= 0.0 && alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C && alpha[i] > C) {
                alpha[i] = C;
                alpha[j] = sum - C;
            } else if (sum <= C && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C && alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = sum - C;
            } else if (sum <= C && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        double dai = alpha[i] - old_ai;
        double daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * k_i[t] * dai + y[j] * k_j[t] * daj);
    }

    model.converged = gap < options.tol;
    model.final_gap = gap;
    model.iterations = iter;
    if (!model.converged)
        std::cerr << "[websift] warning: SMO hit the iteration cap (" << iter
                  << " iterations), final KKT gap " << gap << "\n";

    // Bias from free support vectors, midpoint of the violating bounds
    // otherwise. For free alpha, y_t - u_t equals the bias exactly.
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        double v = -y[t] * grad[t]; // = y_t - u_t
        bool in_up = (y[t] > 0.0 && alpha[t] < C) || (y[t] < 0.0 && alpha[t] > 0.0);
        bool in_low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < C);
        if (in_up) gmax = std::max(gmax, v);
        if (in_low) gmin = std::min(gmin, v);
        if (alpha[t] > 0.0 && alpha[t] < C) {
            free_sum += v;
            ++free_count;
        }
    }
    model.bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                : 0.5 * (gmax + gmin);

    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_vectors.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(t * p),
                                               x.begin() + static_cast<std::ptrdiff_t>((t + 1) * p));
            model.alpha_y.push_back(alpha[t] * y[t]);
        }
    }

    // Training decision values for the calibration; computed from the
    // gradient identity u_t = y_t * (G_t + 1) to avoid n^2 kernel work.
    std::vector<double> decisions(n);
    for (std::size_t t = 0; t < n; ++t) decisions[t] = y[t] * (grad[t] + 1.0) + model.bias;
    model.platt_slope = fit_platt_slope(decisions, train.labels);
    return model;
}

} // namespace websift
