#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace websift {

// Dense numeric design matrix (row-major) with named columns and a binary
// label vector. Rows are sessions, columns are features.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<double> values; // rows() * cols(), row-major
    std::vector<int> labels;    // 0 = normal, 1 = attack

    std::size_t rows() const { return labels.size(); }
    std::size_t cols() const { return columns.size(); }

    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols(), cols()};
    }

    void add_row(std::span<const double> row_values, int label);

    // Row subset (copy), preserving column schema.
    Dataset subset_rows(std::span<const int> indices) const;

    // Column subset by mask (mask.size() == cols(), nonzero = keep).
    Dataset subset_columns(const std::vector<std::uint8_t>& mask) const;

    std::vector<double> column(std::size_t c) const;

    // Stable hash of the column names; stored in manifests and models so a
    // transform applied to mismatched data fails loudly.
    std::string schema_fingerprint() const;

    void check_finite() const; // throws DataError on NaN/Inf
};

// Delimited export with header row; final column is the label (0/1).
void save_dataset_csv(std::ostream& out, const Dataset& data);
Dataset load_dataset_csv(std::istream& in);

std::string schema_fingerprint(const std::vector<std::string>& columns);

} // namespace websift
