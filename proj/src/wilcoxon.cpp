#include "websift/wilcoxon.hpp"

#include "websift/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace websift {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("wilcoxon: samples must be paired");
    if (a.size() < 5) throw DataError("wilcoxon: need at least 5 pairs");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }

    WilcoxonResult result;
    result.n_used = static_cast<int>(diffs.size());
    if (diffs.empty()) return result; // p = 1

    std::vector<std::size_t> order(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::fabs(diffs[x]) < std::fabs(diffs[y]);
    });

    // Averaged ranks are multiples of 1/2; store doubled ranks as integers so
    // the enumeration below compares exactly.
    const std::size_t n = diffs.size();
    std::vector<long> rank2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
        long doubled_avg = static_cast<long>(i + 1 + j + 1); // 2 * average rank
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled_avg;
        i = j + 1;
    }

    long w2 = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (diffs[k] > 0.0) w2 += rank2[k];
    result.w_plus = 0.5 * static_cast<double>(w2);

    if (n <= 25) {
        // Full enumeration of the 2^n sign assignments via Gray code: each
        // step toggles one rank in the running sum.
        std::vector<long> sorted_rank2(n);
        for (std::size_t k = 0; k < n; ++k) sorted_rank2[k] = rank2[k];

        const std::uint64_t total = 1ULL << n;
        std::uint64_t count_ge = 0, count_le = 0;
        long sum = 0; // subset = empty
        std::uint64_t included = 0;
        if (sum >= w2) ++count_ge;
        if (sum <= w2) ++count_le;
        for (std::uint64_t m = 1; m < total; ++m) {
            unsigned bit = static_cast<unsigned>(__builtin_ctzll(m));
            std::uint64_t mask = 1ULL << bit;
            if (included & mask)
                sum -= sorted_rank2[bit];
            else
                sum += sorted_rank2[bit];
            included ^= mask;
            if (sum >= w2) ++count_ge;
            if (sum <= w2) ++count_le;
        }
        double tail = static_cast<double>(std::min(count_ge, count_le)) /
                      static_cast<double>(total);
        result.p_value = std::min(1.0, 2.0 * tail);
        result.exact = true;
    } else {
        // Normal approximation with tie correction and continuity correction.
        double nn = static_cast<double>(n);
        double mean_w = nn * (nn + 1.0) / 4.0;
        double var_w = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && std::fabs(diffs[order[j + 1]]) == std::fabs(diffs[order[i]])) ++j;
            double t = static_cast<double>(j - i + 1);
            var_w -= t * (t * t - 1.0) / 48.0;
            i = j + 1;
        }
        double w = result.w_plus;
        double num = w - mean_w;
        if (num > 0.5)
            num -= 0.5;
        else if (num < -0.5)
            num += 0.5;
        double z = var_w > 0.0 ? num / std::sqrt(var_w) : 0.0;
        result.p_value = std::min(1.0, 2.0 * normal_cdf(-std::fabs(z)));
        result.exact = false;
    }
    return result;
}

} // namespace websift
