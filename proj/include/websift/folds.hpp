#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace websift {

// Stratified k-fold split: folds partition [0, labels.size()) and per-fold
// class counts differ from the exact proportional share by at most one.
// Throws ProtocolError when some class has fewer than k members.
std::vector<std::vector<int>> stratified_kfold(std::span<const int> labels, int k,
                                               std::uint64_t seed);

std::vector<int> complement_indices(std::size_t n, std::span<const int> fold);

// Runtime guard that fit-time steps only ever touch training rows. The
// experiment runner arms the audit with the held-out fold, and every
// fit-side consumer reports the row indices it reads. A reported test index
// is a protocol violation and aborts the run.
class LeakageAudit {
public:
    LeakageAudit() = default;
    LeakageAudit(std::size_t n_rows, std::span<const int> test_indices);

    void record_fit_access(std::span<const int> rows, const std::string& stage);

    bool armed() const { return !test_mask_.empty(); }
    const std::vector<std::string>& stages_seen() const { return stages_; }

private:
    std::vector<std::uint8_t> test_mask_;
    std::vector<std::string> stages_;
};

} // namespace websift
