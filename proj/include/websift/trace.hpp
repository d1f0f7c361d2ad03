#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace websift {

enum class TraceLabel { normal = 0, attack = 1 };

// One line of the original trace. `extras` keeps every column that is not
// part of the mandatory mapping, in file order, so retained original
// variables can be picked up later by name.
struct RawHttpRecord {
    std::string method;
    std::string url;
    std::string payload;
    std::string cookie;
    TraceLabel label = TraceLabel::normal;
    std::vector<std::pair<std::string, std::string>> extras;
    std::size_t line_no = 0;

    const std::string* extra(const std::string& name) const {
        for (const auto& [k, v] : extras)
            if (k == name) return &v;
        return nullptr;
    }
};

struct ParseFailure {
    std::size_t line_no = 0;
    std::string reason;
};

enum class TraceFormat { delimited, jsonl };

struct ColumnMap {
    std::string method = "method";
    std::string url = "url";
    std::string payload = "payload";
    std::string cookie = "cookie";
    std::string label = "label";
};

struct TraceReadOptions {
    TraceFormat format = TraceFormat::delimited;
    char delimiter = ',';
    ColumnMap columns;
    // Tokens recognized for each class (case-insensitive).
    std::vector<std::string> normal_tokens = {"normal", "norm", "0"};
    std::vector<std::string> attack_tokens = {"attack", "anomalous", "anom", "1"};
};

struct TraceParseResult {
    std::vector<RawHttpRecord> records;
    std::vector<ParseFailure> failures;
};

// Parses a trace stream into records. Structurally malformed rows are
// reported in `failures` with their line numbers, never silently dropped.
// Missing mandatory columns and unknown label tokens throw SchemaError.
TraceParseResult parse_trace_file(std::istream& in, const TraceReadOptions& options);

enum class LabelRule { any_attack, majority, unanimous_else_reject };

LabelRule parse_label_rule(const std::string& name);
std::string to_string(LabelRule rule);
std::string to_string(TraceLabel label);

struct Session {
    std::string session_id;
    std::vector<RawHttpRecord> records;
    std::string full_payload; // member payloads joined with '&', empties skipped
    TraceLabel label = TraceLabel::normal;
};

struct RejectedSession {
    std::string session_id;
    std::size_t n_records = 0;
    std::string reason;
};

struct GroupResult {
    std::vector<Session> sessions;
    std::vector<RejectedSession> rejected; // only under unanimous_else_reject
};

// Groups records by cookie (first-appearance order). Records with an empty
// cookie each form a singleton session. The session label is resolved by
// `rule`; under `majority` a tie resolves to attack.
GroupResult group_sessions(std::vector<RawHttpRecord> records, LabelRule rule);

struct CorpusStats {
    std::size_t sessions = 0;
    std::size_t normal = 0;
    std::size_t attack = 0;
    std::size_t records = 0;
};

CorpusStats corpus_statistics(const std::vector<Session>& sessions);

// "a=1" + "" + "b=2" -> "a=1&b=2"
std::string join_payloads(const std::vector<RawHttpRecord>& records);

} // namespace websift
