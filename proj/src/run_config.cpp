#include "websift/run_config.hpp"

#include "websift/errors.hpp"
#include "websift/parallel.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace websift {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        // trim
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) continue;
        out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out;
    in >> out;
    if (in.fail()) throw SchemaError("config: bad numeric value for '" + key + "': " + value);
    return out;
}

} // namespace

void RunConfig::apply_key_value(const std::string& key, const std::string& value) {
    if (key == "input") input = value;
    else if (key == "data") data = value;
    else if (key == "format") format = value;
    else if (key == "delimiter") delimiter = value.empty() ? ',' : value[0];
    else if (key == "map.method") columns.method = value;
    else if (key == "map.url") columns.url = value;
    else if (key == "map.payload") columns.payload = value;
    else if (key == "map.cookie") columns.cookie = value;
    else if (key == "map.label") columns.label = value;
    else if (key == "label-rule") label_rule = value;
    else if (key == "url-base") url_base = value;
    else if (key == "passthrough") passthrough = split_list(value);
    else if (key == "selectors") selectors = split_list(value);
    else if (key == "classifiers") classifiers = split_list(value);
    else if (key == "folds") folds = parse_number<int>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "out-dir") out_dir = value;
    else if (key == "jobs") jobs = parse_number<int>(key, value);
    else if (key == "knn-k") hp.knn_k = parse_number<int>(key, value);
    else if (key == "svm-cost") hp.svm.cost = parse_number<double>(key, value);
    else if (key == "svm-gamma") hp.svm.gamma = parse_number<double>(key, value);
    else if (key == "rf-trees") hp.forest.n_trees = parse_number<int>(key, value);
    else if (key == "rf-mtry") hp.forest.mtry = parse_number<int>(key, value);
    else if (key == "boost-learners") hp.boost.n_learners = parse_number<int>(key, value);
    else if (key == "boost-depth") hp.boost.max_depth = parse_number<int>(key, value);
    else if (key == "boost-learning-rate") hp.boost.learning_rate = parse_number<double>(key, value);
    else if (key == "boost-l2") hp.boost.l2_reg = parse_number<double>(key, value);
    else if (key == "boost-subsample") hp.boost.subsample = parse_number<double>(key, value);
    else if (key == "boost-colsample") hp.boost.colsample = parse_number<double>(key, value);
    else if (key == "lasso-grid-size") hp.lasso.grid_size = parse_number<int>(key, value);
    else if (key == "lasso-inner-folds") hp.lasso.inner_folds = parse_number<int>(key, value);
    else if (key == "lasso-threshold") hp.lasso_select_threshold = parse_number<double>(key, value);
    else if (key == "ig-bins") hp.ig.bins = parse_number<int>(key, value);
    else throw SchemaError("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file " + path);
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(a, eq - a);
        std::size_t key_end = key.find_last_not_of(" \t");
        key.resize(key_end == std::string::npos ? 0 : key_end + 1);
        std::string value = line.substr(eq + 1);
        std::size_t va = value.find_first_not_of(" \t");
        std::size_t vb = value.find_last_not_of(" \t\r");
        value = va == std::string::npos ? "" : value.substr(va, vb - va + 1);
        config.apply_key_value(key, value);
    }
    return config;
}

namespace {

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ",";
        out += items[i];
    }
    return out;
}

} // namespace

std::string RunConfig::to_file_string() const {
    std::ostringstream out;
    out << "# websift run configuration\n";
    if (!input.empty()) out << "input = " << input << "\n";
    if (!data.empty()) out << "data = " << data << "\n";
    out << "format = " << format << "\n";
    out << "delimiter = " << delimiter << "\n";
    out << "map.method = " << columns.method << "\n";
    out << "map.url = " << columns.url << "\n";
    out << "map.payload = " << columns.payload << "\n";
    out << "map.cookie = " << columns.cookie << "\n";
    out << "map.label = " << columns.label << "\n";
    out << "label-rule = " << label_rule << "\n";
    out << "url-base = " << url_base << "\n";
    if (!passthrough.empty()) out << "passthrough = " << join_list(passthrough) << "\n";
    out << "selectors = " << join_list(selectors) << "\n";
    out << "classifiers = " << join_list(classifiers) << "\n";
    out << "folds = " << folds << "\n";
    out << "seed = " << resolved_seed() << "\n";
    out << "out-dir = " << out_dir << "\n";
    out << "jobs = " << jobs << "\n";
    out << "knn-k = " << hp.knn_k << "\n";
    out << "svm-cost = " << hp.svm.cost << "\n";
    out << "svm-gamma = " << hp.svm.gamma << "\n";
    out << "rf-trees = " << hp.forest.n_trees << "\n";
    out << "rf-mtry = " << hp.forest.mtry << "\n";
    out << "boost-learners = " << hp.boost.n_learners << "\n";
    out << "boost-depth = " << hp.boost.max_depth << "\n";
    out << "boost-learning-rate = " << hp.boost.learning_rate << "\n";
    out << "boost-l2 = " << hp.boost.l2_reg << "\n";
    out << "boost-subsample = " << hp.boost.subsample << "\n";
    out << "boost-colsample = " << hp.boost.colsample << "\n";
    out << "lasso-grid-size = " << hp.lasso.grid_size << "\n";
    out << "lasso-inner-folds = " << hp.lasso.inner_folds << "\n";
    out << "lasso-threshold = " << hp.lasso_select_threshold << "\n";
    out << "ig-bins = " << hp.ig.bins << "\n";
    return out.str();
}

std::uint64_t RunConfig::resolved_seed() const {
    if (seed.has_value()) return *seed;
    if (const char* env = std::getenv("WEBSIFT_SEED")) {
        std::istringstream in(env);
        std::uint64_t s = 0;
        in >> s;
        if (!in.fail()) return s;
    }
    return 0;
}

TraceReadOptions RunConfig::trace_options() const {
    TraceReadOptions options;
    if (format == "csv" || format == "delimited")
        options.format = TraceFormat::delimited;
    else if (format == "jsonl" || format == "json-lines")
        options.format = TraceFormat::jsonl;
    else
        throw SchemaError("config: unknown format '" + format + "'");
    options.delimiter = delimiter;
    options.columns = columns;
    return options;
}

ExperimentConfig RunConfig::experiment_config() const {
    ExperimentConfig config;
    config.selectors.clear();
    for (const auto& s : selectors) config.selectors.push_back(parse_selector_kind(s));
    config.classifiers.clear();
    for (const auto& c : classifiers) config.classifiers.push_back(parse_classifier_kind(c));
    config.folds = folds;
    config.seed = resolved_seed();
    config.jobs = jobs > 0 ? jobs : default_jobs();
    config.hp = hp;
    config.hp.forest.jobs = 1; // parallelism is at the grid level
    return config;
}

} // namespace websift
