#include "websift/trace.hpp"

#include "websift/csv.hpp"
#include "websift/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace websift {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool token_in(const std::string& value, const std::vector<std::string>& tokens) {
    std::string v = lower(value);
    return std::any_of(tokens.begin(), tokens.end(),
                       [&](const std::string& t) { return lower(t) == v; });
}

TraceLabel parse_label_token(const std::string& value, const TraceReadOptions& options,
                             std::size_t line_no) {
    if (token_in(value, options.attack_tokens)) return TraceLabel::attack;
    if (token_in(value, options.normal_tokens)) return TraceLabel::normal;
    throw SchemaError("line " + std::to_string(line_no) + ": unknown label token '" + value +
                      "'");
}

TraceParseResult parse_delimited(std::istream& in, const TraceReadOptions& options) {
    CsvReader reader(in, options.delimiter);
    std::vector<std::string> fields;
    std::string error;

    if (!reader.next_row(fields, error)) {
        if (!error.empty()) throw SchemaError("header: " + error);
        throw SchemaError("empty input: no header row");
    }

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < fields.size(); ++i) index.emplace(fields[i], i);

    const ColumnMap& cm = options.columns;
    auto mandatory = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw SchemaError("missing mandatory column '" + name + "'");
        return it->second;
    };
    std::size_t method_col = mandatory(cm.method);
    std::size_t url_col = mandatory(cm.url);
    std::size_t payload_col = mandatory(cm.payload);
    std::size_t cookie_col = mandatory(cm.cookie);
    std::size_t label_col = mandatory(cm.label);

    std::vector<std::size_t> extra_cols;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != method_col && i != url_col && i != payload_col && i != cookie_col &&
            i != label_col)
            extra_cols.push_back(i);
    }
    std::vector<std::string> header = fields;

    TraceParseResult result;
    while (reader.next_row(fields, error)) {
        std::size_t line_no = reader.row_start_line();
        if (!error.empty()) {
            result.failures.push_back({line_no, error});
            error.clear();
            continue;
        }
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        if (fields.size() != header.size()) {
            result.failures.push_back(
                {line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size())});
            continue;
        }
        RawHttpRecord rec;
        rec.method = fields[method_col];
        rec.url = fields[url_col];
        rec.payload = fields[payload_col];
        rec.cookie = fields[cookie_col];
        rec.label = parse_label_token(fields[label_col], options, line_no);
        rec.line_no = line_no;
        if (rec.method.empty()) {
            result.failures.push_back({line_no, "empty method"});
            continue;
        }
        for (std::size_t i : extra_cols) rec.extras.emplace_back(header[i], fields[i]);
        result.records.push_back(std::move(rec));
    }
    if (!error.empty()) result.failures.push_back({reader.row_start_line(), error});
    return result;
}

std::string json_scalar_to_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_null()) return "";
    return v.dump();
}

TraceParseResult parse_jsonl(std::istream& in, const TraceReadOptions& options) {
    const ColumnMap& cm = options.columns;
    TraceParseResult result;
    std::string line;
    std::size_t line_no = 0;
    bool saw_any = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            result.failures.push_back({line_no, "invalid JSON object"});
            saw_any = true;
            continue;
        }
        saw_any = true;
        auto require = [&](const std::string& name) -> const nlohmann::json& {
            auto it = obj.find(name);
            if (it == obj.end())
                throw SchemaError("line " + std::to_string(line_no) +
                                  ": missing mandatory column '" + name + "'");
            return *it;
        };
        RawHttpRecord rec;
        rec.method = json_scalar_to_string(require(cm.method));
        rec.url = json_scalar_to_string(require(cm.url));
        rec.payload = json_scalar_to_string(require(cm.payload));
        rec.cookie = json_scalar_to_string(require(cm.cookie));
        rec.label = parse_label_token(json_scalar_to_string(require(cm.label)), options, line_no);
        rec.line_no = line_no;
        if (rec.method.empty()) {
            result.failures.push_back({line_no, "empty method"});
            continue;
        }
        for (const auto& [key, value] : obj.items()) {
            if (key == cm.method || key == cm.url || key == cm.payload || key == cm.cookie ||
                key == cm.label)
                continue;
            rec.extras.emplace_back(key, json_scalar_to_string(value));
        }
        result.records.push_back(std::move(rec));
    }
    (void)saw_any;
    return result;
}

} // namespace

TraceParseResult parse_trace_file(std::istream& in, const TraceReadOptions& options) {
    switch (options.format) {
    case TraceFormat::delimited: return parse_delimited(in, options);
    case TraceFormat::jsonl: return parse_jsonl(in, options);
    }
    throw SchemaError("unknown trace format");
}

LabelRule parse_label_rule(const std::string& name) {
    if (name == "any-attack") return LabelRule::any_attack;
    if (name == "majority") return LabelRule::majority;
    if (name == "unanimous-else-reject") return LabelRule::unanimous_else_reject;
    throw SchemaError("unknown label rule '" + name + "'");
}

std::string to_string(LabelRule rule) {
    switch (rule) {
    case LabelRule::any_attack: return "any-attack";
    case LabelRule::majority: return "majority";
    case LabelRule::unanimous_else_reject: return "unanimous-else-reject";
    }
    return "?";
}

std::string to_string(TraceLabel label) {
    return label == TraceLabel::attack ? "attack" : "normal";
}

std::string join_payloads(const std::vector<RawHttpRecord>& records) {
    std::string full;
    for (const auto& rec : records) {
        if (rec.payload.empty()) continue;
        if (!full.empty()) full.push_back('&');
        full += rec.payload;
    }
    return full;
}

GroupResult group_sessions(std::vector<RawHttpRecord> records, LabelRule rule) {
    GroupResult result;
    std::unordered_map<std::string, std::size_t> by_cookie;
    std::vector<std::vector<RawHttpRecord>> groups;
    std::vector<std::string> group_ids;

    std::size_t singleton_counter = 0;
    for (auto& rec : records) {
        if (rec.cookie.empty()) {
            groups.push_back({std::move(rec)});
            group_ids.push_back("@no-cookie-" + std::to_string(singleton_counter++));
            continue;
        }
        auto [it, inserted] = by_cookie.emplace(rec.cookie, groups.size());
        if (inserted) {
            group_ids.push_back(rec.cookie);
            groups.emplace_back();
        }
        groups[it->second].push_back(std::move(rec));
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::size_t attacks = 0;
        for (const auto& rec : groups[g])
            if (rec.label == TraceLabel::attack) ++attacks;
        std::size_t n = groups[g].size();

        TraceLabel label;
        switch (rule) {
        case LabelRule::any_attack: label = attacks > 0 ? TraceLabel::attack : TraceLabel::normal; break;
        case LabelRule::majority:
            // tie -> attack
            label = 2 * attacks >= n ? (attacks > 0 ? TraceLabel::attack : TraceLabel::normal)
                                     : TraceLabel::normal;
            break;
        case LabelRule::unanimous_else_reject:
            if (attacks != 0 && attacks != n) {
                result.rejected.push_back({group_ids[g], n, "mixed labels in session"});
                continue;
            }
            label = attacks == n && n > 0 ? TraceLabel::attack : TraceLabel::normal;
            break;
        default: label = TraceLabel::normal; break;
        }

        Session s;
        s.session_id = group_ids[g];
        s.records = std::move(groups[g]);
        s.full_payload = join_payloads(s.records);
        s.label = label;
        result.sessions.push_back(std::move(s));
    }
    return result;
}

CorpusStats corpus_statistics(const std::vector<Session>& sessions) {
    CorpusStats stats;
    stats.sessions = sessions.size();
    for (const auto& s : sessions) {
        stats.records += s.records.size();
        if (s.label == TraceLabel::attack)
            ++stats.attack;
        else
            ++stats.normal;
    }
    return stats;
}

} // namespace websift
