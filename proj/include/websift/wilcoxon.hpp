#pragma once

#include <span>

namespace websift {

struct WilcoxonResult {
    double w_plus = 0.0;  // rank sum of positive differences
    double p_value = 1.0; // two-sided
    int n_used = 0;       // pairs remaining after dropping zero differences
    bool exact = true;    // full enumeration (n_used <= 25) vs normal approximation
};

// Paired two-sided Wilcoxon signed-rank test. Zero differences are dropped;
// tied |differences| receive averaged ranks. For n_used <= 25 the null
// distribution is enumerated over all 2^n sign assignments; beyond that a
// normal approximation with continuity correction is used. All differences
// zero gives p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

} // namespace websift
