#pragma once

#include "websift/experiment.hpp"
#include "websift/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace websift {

// Everything a run needs, serializable to a key=value document. A run's
// snapshot reloads to an identical run; command-line flags override file
// values.
struct RunConfig {
    std::string input;      // raw trace path
    std::string data;       // pre-extracted dataset path (alternative to input)
    std::string format = "csv"; // csv | jsonl
    char delimiter = ',';
    ColumnMap columns;
    std::string label_rule = "any-attack";
    std::string url_base = "http://localhost:8080/";
    std::vector<std::string> passthrough;
    std::vector<std::string> selectors = {"none", "ig", "lasso", "rf"};
    std::vector<std::string> classifiers = {"lasso", "knn", "svm", "rf", "boost"};
    int folds = 10;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "websift-out";
    int jobs = 0; // 0 = all cores
    HyperParams hp;

    void apply_key_value(const std::string& key, const std::string& value);
    static RunConfig from_file(const std::string& path);
    std::string to_file_string() const;

    // Seed resolution order: explicit value, WEBSIFT_SEED, default 0.
    std::uint64_t resolved_seed() const;

    TraceReadOptions trace_options() const;
    ExperimentConfig experiment_config() const;
};

std::vector<std::string> split_list(const std::string& csv);

} // namespace websift
