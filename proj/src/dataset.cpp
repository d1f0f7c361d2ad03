#include "websift/dataset.hpp"

#include "websift/csv.hpp"
#include "websift/errors.hpp"
#include "websift/rng.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace websift {

namespace {

// Shortest decimal text that round-trips a double.
std::string format_double(double v) {
    if (v == static_cast<long long>(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw SchemaError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
    return out;
}

} // namespace

void Dataset::add_row(std::span<const double> row_values, int label) {
    assert(row_values.size() == cols());
    values.insert(values.end(), row_values.begin(), row_values.end());
    labels.push_back(label);
}

Dataset Dataset::subset_rows(std::span<const int> indices) const {
    Dataset out;
    out.columns = columns;
    out.values.reserve(indices.size() * cols());
    out.labels.reserve(indices.size());
    for (int idx : indices) {
        auto r = row(static_cast<std::size_t>(idx));
        out.values.insert(out.values.end(), r.begin(), r.end());
        out.labels.push_back(labels[static_cast<std::size_t>(idx)]);
    }
    return out;
}

Dataset Dataset::subset_columns(const std::vector<std::uint8_t>& mask) const {
    assert(mask.size() == cols());
    Dataset out;
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < cols(); ++c) {
        if (mask[c]) {
            keep.push_back(c);
            out.columns.push_back(columns[c]);
        }
    }
    out.values.reserve(rows() * keep.size());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c : keep) out.values.push_back(at(r, c));
    out.labels = labels;
    return out;
}

std::vector<double> Dataset::column(std::size_t c) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
    return out;
}

std::string schema_fingerprint(const std::vector<std::string>& columns) {
    std::uint64_t h = fnv1a("schema-v1");
    for (const auto& name : columns) {
        h = fnv1a(name, h);
        h = fnv1a("\x1f", h);
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string Dataset::schema_fingerprint() const { return websift::schema_fingerprint(columns); }

void Dataset::check_finite() const {
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c = 0; c < cols(); ++c)
            if (!std::isfinite(at(r, c)))
                throw DataError("non-finite value at row " + std::to_string(r) + ", column '" +
                                columns[c] + "'");
}

void save_dataset_csv(std::ostream& out, const Dataset& data) {
    std::vector<std::string> fields = data.columns;
    fields.push_back("label");
    write_csv_row(out, fields);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        fields.clear();
        for (std::size_t c = 0; c < data.cols(); ++c)
            fields.push_back(format_double(data.at(r, c)));
        fields.push_back(data.labels[r] ? "1" : "0");
        write_csv_row(out, fields);
    }
}

Dataset load_dataset_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::string error;
    if (!reader.next_row(fields, error) || !error.empty())
        throw SchemaError("dataset: missing or bad header row");
    if (fields.empty() || fields.back() != "label")
        throw SchemaError("dataset: last column must be 'label'");

    Dataset data;
    data.columns.assign(fields.begin(), fields.end() - 1);
    const std::size_t width = data.columns.size();

    while (reader.next_row(fields, error)) {
        std::size_t line_no = reader.row_start_line();
        if (!error.empty()) throw SchemaError("line " + std::to_string(line_no) + ": " + error);
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != width + 1)
            throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(width + 1) + " fields, got " +
                              std::to_string(fields.size()));
        for (std::size_t c = 0; c < width; ++c)
            data.values.push_back(parse_double(fields[c], line_no));
        const std::string& lab = fields[width];
        if (lab == "0")
            data.labels.push_back(0);
        else if (lab == "1")
            data.labels.push_back(1);
        else
            throw SchemaError("line " + std::to_string(line_no) + ": label must be 0 or 1, got '" +
                              lab + "'");
    }
    return data;
}

} // namespace websift
