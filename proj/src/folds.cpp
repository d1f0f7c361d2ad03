#include "websift/folds.hpp"

#include "websift/errors.hpp"
#include "websift/rng.hpp"

#include <algorithm>

namespace websift {

std::vector<std::vector<int>> stratified_kfold(std::span<const int> labels, int k,
                                               std::uint64_t seed) {
    if (k < 2) throw ProtocolError("stratified_kfold: k must be >= 2");

    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] != 0 ? pos : neg).push_back(static_cast<int>(i));

    for (const auto* cls : {&neg, &pos}) {
        if (cls->size() < static_cast<std::size_t>(k))
            throw ProtocolError("stratified_kfold: a class has " + std::to_string(cls->size()) +
                                " members, fewer than k=" + std::to_string(k));
    }

    Rng rng(derive_seed(seed, "stratified-kfold"));
    rng.shuffle(neg);
    rng.shuffle(pos);

    // Round-robin dealing gives each fold floor(m/k) or ceil(m/k) members of
    // each class.
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < neg.size(); ++i)
        folds[i % static_cast<std::size_t>(k)].push_back(neg[i]);
    for (std::size_t i = 0; i < pos.size(); ++i)
        folds[i % static_cast<std::size_t>(k)].push_back(pos[i]);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

std::vector<int> complement_indices(std::size_t n, std::span<const int> fold) {
    std::vector<std::uint8_t> in_fold(n, 0);
    for (int i : fold) in_fold[static_cast<std::size_t>(i)] = 1;
    std::vector<int> out;
    out.reserve(n - fold.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!in_fold[i]) out.push_back(static_cast<int>(i));
    return out;
}

LeakageAudit::LeakageAudit(std::size_t n_rows, std::span<const int> test_indices)
    : test_mask_(n_rows, 0) {
    for (int i : test_indices) test_mask_[static_cast<std::size_t>(i)] = 1;
}

void LeakageAudit::record_fit_access(std::span<const int> rows, const std::string& stage) {
    stages_.push_back(stage);
    if (test_mask_.empty()) return;
    for (int i : rows) {
        if (i < 0 || static_cast<std::size_t>(i) >= test_mask_.size())
            throw ProtocolError("leakage audit: stage '" + stage + "' touched out-of-range row " +
                                std::to_string(i));
        if (test_mask_[static_cast<std::size_t>(i)])
            throw ProtocolError("leakage audit: stage '" + stage +
                                "' touched held-out test row " + std::to_string(i));
    }
}

} // namespace websift
