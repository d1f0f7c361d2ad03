#include "websift/experiment.hpp"

#include "websift/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace websift {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Table 2 style: integers bare, otherwise one decimal (e.g. 78, 35.1).
std::string var_count(double v) {
    if (v == std::floor(v)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    return fixed(v, 1);
}

std::string mean_std(double m, double s) { return fixed(m, 3) + "+-" + fixed(s, 2); }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

} // namespace

std::string render_table(const ExperimentReport& report) {
    std::ostringstream out;
    out << "FS      Classifier  Var    Accuracy      Precision     Recall        "
           "F1-Score      gmean         AUC\n";
    for (const auto& cell : report.cells) {
        char line[256];
        std::string clf = to_string(cell.classifier) + (cell.significant ? "*" : "");
        std::snprintf(line, sizeof(line), "%-7s %-11s %-6s %-13s %-13s %-13s %-13s %-13s %-13s\n",
                      to_string(cell.selector).c_str(), clf.c_str(),
                      var_count(cell.mean_retained).c_str(),
                      mean_std(cell.metric_mean[0], cell.metric_std[0]).c_str(),
                      mean_std(cell.metric_mean[1], cell.metric_std[1]).c_str(),
                      mean_std(cell.metric_mean[2], cell.metric_std[2]).c_str(),
                      mean_std(cell.metric_mean[3], cell.metric_std[3]).c_str(),
                      mean_std(cell.metric_mean[4], cell.metric_std[4]).c_str(),
                      mean_std(cell.metric_mean[5], cell.metric_std[5]).c_str());
        out << line;
    }
    return out.str();
}

void emit_report(const ExperimentReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    fs::create_directories(dir);

    // report.csv: one row per (selector, classifier) cell, Table 2 layout.
    {
        std::ostringstream out;
        out << "fs,classifier,significant,vars,accuracy,precision,recall,f1,gmean,auc\n";
        for (const auto& cell : report.cells) {
            out << to_string(cell.selector) << ',' << to_string(cell.classifier) << ','
                << (cell.significant ? "*" : "") << ',' << var_count(cell.mean_retained);
            for (int m = 0; m < 6; ++m)
                out << ',' << mean_std(cell.metric_mean[m], cell.metric_std[m]);
            out << '\n';
        }
        write_file(dir / "report.csv", out.str());
    }

    // auc_bars.csv: bar-plot data, AUC per classifier per selector.
    {
        std::ostringstream out;
        out << "fs,classifier,auc_mean,auc_std\n";
        for (const auto& cell : report.cells)
            out << to_string(cell.selector) << ',' << to_string(cell.classifier) << ','
                << fixed(cell.metric_mean[5], 6) << ',' << fixed(cell.metric_std[5], 6) << '\n';
        write_file(dir / "auc_bars.csv", out.str());
    }

    // radar_classifiers.csv / radar_selectors.csv: per-metric averages
    // grouped by classifier (over selectors) and by selector (over
    // classifiers).
    {
        std::ostringstream out;
        out << "classifier";
        for (const char* name : kMetricNames) out << ',' << name;
        out << '\n';
        std::vector<ClassifierKind> seen;
        for (const auto& cell : report.cells)
            if (std::find(seen.begin(), seen.end(), cell.classifier) == seen.end())
                seen.push_back(cell.classifier);
        for (ClassifierKind clf : seen) {
            double sums[6] = {0, 0, 0, 0, 0, 0};
            int count = 0;
            for (const auto& cell : report.cells) {
                if (cell.classifier != clf) continue;
                for (int m = 0; m < 6; ++m) sums[m] += cell.metric_mean[m];
                ++count;
            }
            out << to_string(clf);
            for (int m = 0; m < 6; ++m) out << ',' << fixed(sums[m] / count, 6);
            out << '\n';
        }
        write_file(dir / "radar_classifiers.csv", out.str());
    }
    {
        std::ostringstream out;
        out << "fs";
        for (const char* name : kMetricNames) out << ',' << name;
        out << '\n';
        std::vector<SelectorKind> seen;
        for (const auto& cell : report.cells)
            if (std::find(seen.begin(), seen.end(), cell.selector) == seen.end())
                seen.push_back(cell.selector);
        for (SelectorKind sel : seen) {
            double sums[6] = {0, 0, 0, 0, 0, 0};
            int count = 0;
            for (const auto& cell : report.cells) {
                if (cell.selector != sel) continue;
                for (int m = 0; m < 6; ++m) sums[m] += cell.metric_mean[m];
                ++count;
            }
            out << to_string(sel);
            for (int m = 0; m < 6; ++m) out << ',' << fixed(sums[m] / count, 6);
            out << '\n';
        }
        write_file(dir / "radar_selectors.csv", out.str());
    }

    // report.json: full fold-level detail plus config and seed.
    {
        nlohmann::json j;
        j["seed"] = report.seed;
        j["folds"] = report.folds;
        j["config"] = nlohmann::json::parse(report.config_json);
        j["warnings"] = report.warnings;

        nlohmann::json cells = nlohmann::json::array();
        for (const auto& cell : report.cells) {
            nlohmann::json c;
            c["fs"] = to_string(cell.selector);
            c["classifier"] = to_string(cell.classifier);
            c["significant"] = cell.significant;
            c["mean_retained"] = cell.mean_retained;
            c["auc_defined_folds"] = cell.auc_defined_folds;
            for (int m = 0; m < 6; ++m) {
                c[std::string(kMetricNames[m]) + "_mean"] = cell.metric_mean[m];
                c[std::string(kMetricNames[m]) + "_std"] = cell.metric_std[m];
            }
            cells.push_back(c);
        }
        j["cells"] = cells;

        nlohmann::json folds = nlohmann::json::array();
        for (const auto& r : report.fold_results) {
            nlohmann::json f;
            f["fold"] = r.fold;
            f["fs"] = to_string(r.selector);
            f["classifier"] = to_string(r.classifier);
            f["retained"] = r.retained;
            f["selection_fallback"] = r.selection_fallback;
            f["tp"] = r.metrics.confusion.tp;
            f["fp"] = r.metrics.confusion.fp;
            f["tn"] = r.metrics.confusion.tn;
            f["fn"] = r.metrics.confusion.fn;
            std::vector<double> values = metric_values(r.metrics);
            for (int m = 0; m < 6; ++m) f[kMetricNames[m]] = values[static_cast<std::size_t>(m)];
            f["auc_defined"] = r.metrics.auc_defined;
            f["degenerate_precision"] = r.metrics.degenerate_precision;
            folds.push_back(f);
        }
        j["fold_results"] = folds;
        write_file(dir / "report.json", j.dump(2) + "\n");
    }
}

} // namespace websift
