#include "websift/features.hpp"

#include "websift/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace websift {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool parse_numeric(const std::string& s, double& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename T>
int index_of(const std::vector<T>& v, const T& x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) return static_cast<int>(it - v.begin());
    return -1;
}

} // namespace

std::vector<PayloadPair> split_payload_pairs(std::string_view payload) {
    std::vector<PayloadPair> pairs;
    std::size_t pos = 0;
    while (pos <= payload.size()) {
        std::size_t amp = payload.find('&', pos);
        std::string_view fragment = payload.substr(pos, amp == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : amp - pos);
        std::size_t eq = fragment.find('=');
        if (eq != std::string_view::npos)
            pairs.push_back({fragment.substr(0, eq), fragment.substr(eq + 1)});
        if (amp == std::string_view::npos) break;
        pos = amp + 1;
    }
    return pairs;
}

UrlParts decompose_url(std::string_view url, std::string_view base) {
    UrlParts parts;
    if (url.size() <= base.size() || url.substr(0, base.size()) != base) return parts;

    std::string_view path = url.substr(base.size());
    std::vector<std::string_view> segments;
    std::size_t pos = 0;
    while (true) {
        std::size_t slash = path.find('/', pos);
        if (slash == std::string_view::npos) {
            segments.push_back(path.substr(pos));
            break;
        }
        segments.push_back(path.substr(pos, slash - pos));
        pos = slash + 1;
    }

    std::string_view file = segments.back();
    std::size_t dot = file.rfind('.');
    if (dot == std::string_view::npos || dot + 1 == file.size()) return parts; // no extension

    parts.valid = true;
    parts.num_dirs = segments.size() - 1;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) parts.length_dirs += segments[i].size();
    parts.length_file = dot;
    parts.extension = ascii_lower(file.substr(dot + 1));
    return parts;
}

FeatureVocabulary build_vocabulary(const std::vector<Session>& sessions,
                                   const ExtractConfig& config) {
    if (sessions.empty()) throw DataError("cannot build a vocabulary from zero sessions");

    std::set<std::string> keys, extensions, methods;
    for (const auto& session : sessions) {
        for (const auto& pair : split_payload_pairs(session.full_payload))
            keys.insert(std::string(pair.key));
        for (const auto& rec : session.records) {
            methods.insert(rec.method);
            UrlParts parts = decompose_url(rec.url, config.url_base);
            if (parts.valid) extensions.insert(parts.extension);
        }
    }

    FeatureVocabulary vocab;
    vocab.url_base = config.url_base;
    vocab.payload_keys.assign(keys.begin(), keys.end());
    vocab.url_extensions.assign(extensions.begin(), extensions.end());
    vocab.method_values.assign(methods.begin(), methods.end());

    for (const auto& name : config.passthrough_names) {
        PassthroughSpec spec;
        spec.name = name;
        std::set<std::string> categories;
        bool all_numeric = true;
        bool any_value = false;
        for (const auto& session : sessions) {
            for (const auto& rec : session.records) {
                const std::string* v = rec.extra(name);
                if (v == nullptr || v->empty()) continue;
                any_value = true;
                double ignored;
                if (!parse_numeric(*v, ignored)) all_numeric = false;
                categories.insert(*v);
            }
        }
        spec.numeric = all_numeric || !any_value;
        if (!spec.numeric) spec.categories.assign(categories.begin(), categories.end());
        vocab.passthrough.push_back(std::move(spec));
    }
    return vocab;
}

std::vector<std::string> FeatureVocabulary::column_names() const {
    std::vector<std::string> names;
    for (const auto& m : method_values) names.push_back("method." + m);
    for (const auto& k : payload_keys) names.push_back("key." + k);
    for (const auto& k : payload_keys) names.push_back("length." + k);
    names.push_back("num.keys");
    names.push_back("total.length");
    names.push_back("isValidURL");
    names.push_back("numDir");
    names.push_back("lengthDir");
    names.push_back("lengthFile");
    for (const auto& e : url_extensions) names.push_back("ext." + e);
    for (const auto& spec : passthrough) {
        if (spec.numeric) {
            names.push_back(spec.name);
        } else {
            for (const auto& cat : spec.categories) names.push_back(spec.name + "." + cat);
        }
    }
    return names;
}

EncodeDiagnostics& EncodeDiagnostics::operator+=(const EncodeDiagnostics& other) {
    unseen_payload_keys += other.unseen_payload_keys;
    unseen_methods += other.unseen_methods;
    unseen_extensions += other.unseen_extensions;
    missing_passthrough += other.missing_passthrough;
    return *this;
}

std::vector<double> encode_method(const std::string& method, const FeatureVocabulary& vocab,
                                  EncodeDiagnostics* diag) {
    std::vector<double> block(vocab.method_values.size(), 0.0);
    int idx = index_of(vocab.method_values, method);
    if (idx >= 0)
        block[static_cast<std::size_t>(idx)] = 1.0;
    else if (diag != nullptr)
        ++diag->unseen_methods;
    return block;
}

std::vector<double> extract_payload_features(std::string_view full_payload,
                                             const FeatureVocabulary& vocab,
                                             EncodeDiagnostics* diag) {
    const std::size_t nk = vocab.payload_keys.size();
    std::vector<double> block(2 * nk + 2, 0.0);
    double total_length = 0.0;

    for (const auto& pair : split_payload_pairs(full_payload)) {
        total_length += static_cast<double>(pair.value.size());
        int idx = index_of(vocab.payload_keys, std::string(pair.key));
        if (idx >= 0) {
            block[static_cast<std::size_t>(idx)] = 1.0;
            block[nk + static_cast<std::size_t>(idx)] +=
                static_cast<double>(pair.value.size());
        } else if (diag != nullptr) {
            ++diag->unseen_payload_keys;
        }
    }

    double num_keys = 0.0;
    for (std::size_t i = 0; i < nk; ++i) num_keys += block[i];
    block[2 * nk] = num_keys;
    block[2 * nk + 1] = total_length;
    return block;
}

std::vector<double> extract_url_features(std::string_view url, const FeatureVocabulary& vocab,
                                         EncodeDiagnostics* diag) {
    std::vector<double> block(4 + vocab.url_extensions.size(), 0.0);
    UrlParts parts = decompose_url(url, vocab.url_base);
    if (!parts.valid) return block;

    block[0] = 1.0;
    block[1] = static_cast<double>(parts.num_dirs);
    block[2] = static_cast<double>(parts.length_dirs);
    block[3] = static_cast<double>(parts.length_file);
    int idx = index_of(vocab.url_extensions, parts.extension);
    if (idx >= 0)
        block[4 + static_cast<std::size_t>(idx)] = 1.0;
    else if (diag != nullptr)
        ++diag->unseen_extensions;
    return block;
}

namespace {

void encode_passthrough(const Session& session, const PassthroughSpec& spec,
                        std::vector<double>& out, EncodeDiagnostics* diag) {
    // Session-level value: the first record that carries the column.
    const std::string* value = nullptr;
    for (const auto& rec : session.records) {
        const std::string* v = rec.extra(spec.name);
        if (v != nullptr && !v->empty()) {
            value = v;
            break;
        }
    }
    if (spec.numeric) {
        double parsed = 0.0;
        if (value == nullptr || !parse_numeric(*value, parsed)) {
            if (diag != nullptr) ++diag->missing_passthrough;
            parsed = 0.0;
        }
        out.push_back(parsed);
    } else {
        std::size_t start = out.size();
        out.resize(out.size() + spec.categories.size(), 0.0);
        if (value == nullptr) {
            if (diag != nullptr) ++diag->missing_passthrough;
            return;
        }
        int idx = index_of(spec.categories, *value);
        if (idx >= 0)
            out[start + static_cast<std::size_t>(idx)] = 1.0;
        else if (diag != nullptr)
            ++diag->missing_passthrough;
    }
}

} // namespace

std::vector<double> encode_session(const Session& session, const FeatureVocabulary& vocab,
                                   EncodeDiagnostics* diag) {
    // A session's method is its first record's method (sessions of the
    // original corpus are built from one request flow).
    const std::string& method =
        session.records.empty() ? std::string() : session.records.front().method;
    const std::string& url = session.records.empty() ? std::string() : session.records.front().url;

    std::vector<double> row = encode_method(method, vocab, diag);
    std::vector<double> payload = extract_payload_features(session.full_payload, vocab, diag);
    row.insert(row.end(), payload.begin(), payload.end());
    std::vector<double> url_block = extract_url_features(url, vocab, diag);
    row.insert(row.end(), url_block.begin(), url_block.end());
    for (const auto& spec : vocab.passthrough) encode_passthrough(session, spec, row, diag);
    return row;
}

Dataset encode_sessions(const std::vector<Session>& sessions, const FeatureVocabulary& vocab,
                        EncodeDiagnostics* diag) {
    Dataset data;
    data.columns = vocab.column_names();
    data.values.reserve(sessions.size() * data.columns.size());
    for (const auto& session : sessions) {
        std::vector<double> row = encode_session(session, vocab, diag);
        data.add_row(row, session.label == TraceLabel::attack ? 1 : 0);
    }
    return data;
}

std::string FeatureVocabulary::to_json_string() const {
    nlohmann::json j;
    j["payload_keys"] = payload_keys;
    j["url_extensions"] = url_extensions;
    j["method_values"] = method_values;
    j["url_base"] = url_base;
    j["schema_fingerprint"] = fingerprint();
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& spec : passthrough) {
        nlohmann::json p;
        p["name"] = spec.name;
        p["numeric"] = spec.numeric;
        p["categories"] = spec.categories;
        pts.push_back(p);
    }
    j["passthrough"] = pts;
    return j.dump(2);
}

FeatureVocabulary FeatureVocabulary::from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw SchemaError("vocabulary manifest: invalid JSON");
    FeatureVocabulary vocab;
    try {
        vocab.payload_keys = j.at("payload_keys").get<std::vector<std::string>>();
        vocab.url_extensions = j.at("url_extensions").get<std::vector<std::string>>();
        vocab.method_values = j.at("method_values").get<std::vector<std::string>>();
        vocab.url_base = j.at("url_base").get<std::string>();
        for (const auto& p : j.at("passthrough")) {
            PassthroughSpec spec;
            spec.name = p.at("name").get<std::string>();
            spec.numeric = p.at("numeric").get<bool>();
            spec.categories = p.at("categories").get<std::vector<std::string>>();
            vocab.passthrough.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("vocabulary manifest: ") + e.what());
    }
    if (j.contains("schema_fingerprint") &&
        j["schema_fingerprint"].get<std::string>() != vocab.fingerprint())
        throw SchemaError("vocabulary manifest: schema fingerprint mismatch");
    return vocab;
}

} // namespace websift
