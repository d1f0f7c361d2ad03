#pragma once

#include "websift/dataset.hpp"
#include "websift/trace.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace websift {

// A payload_ is a '&'-joined list of Key=Value fragments. Fragments without
// '=' are malformed and contribute nothing.
struct PayloadPair {
    std::string_view key;
    std::string_view value;
};
std::vector<PayloadPair> split_payload_pairs(std::string_view payload);

// URL grammar: <base><dir/>*<file>.<ext>. A URL outside the base, or whose
// final segment has no extension, is invalid and contributes all-zero URL
// features.
struct UrlParts {
    bool valid = false;
    std::size_t num_dirs = 0;
    std::size_t length_dirs = 0; // sum of directory name lengths
    std::size_t length_file = 0; // filename length without extension and dot
    std::string extension;       // lowercased token after the last dot
};
UrlParts decompose_url(std::string_view url, std::string_view base);

struct PassthroughSpec {
    std::string name;
    bool numeric = true;
    std::vector<std::string> categories; // fit-time categories when non-numeric
};

struct ExtractConfig {
    std::string url_base = "http://localhost:8080/";
    std::vector<std::string> passthrough_names;
};

// Corpus-derived feature schema: payload key labels, URL file extensions and
// method tokens, each sorted so the column layout is deterministic. Fit on
// training-visible sessions only when used inside cross-validation.
struct FeatureVocabulary {
    std::vector<std::string> payload_keys;
    std::vector<std::string> url_extensions;
    std::vector<std::string> method_values;
    std::vector<PassthroughSpec> passthrough;
    std::string url_base = "http://localhost:8080/";

    std::vector<std::string> column_names() const;
    std::size_t width() const { return column_names().size(); }
    std::string fingerprint() const { return schema_fingerprint(column_names()); }

    std::string to_json_string() const;
    static FeatureVocabulary from_json_string(const std::string& text);
};

FeatureVocabulary build_vocabulary(const std::vector<Session>& sessions,
                                   const ExtractConfig& config);

// Transform-time bookkeeping: tokens outside the fit-time vocabulary and
// missing passthrough values are counted, not errors.
struct EncodeDiagnostics {
    std::size_t unseen_payload_keys = 0;
    std::size_t unseen_methods = 0;
    std::size_t unseen_extensions = 0;
    std::size_t missing_passthrough = 0;

    EncodeDiagnostics& operator+=(const EncodeDiagnostics& other);
};

std::vector<double> encode_method(const std::string& method, const FeatureVocabulary& vocab,
                                  EncodeDiagnostics* diag = nullptr);

// [key.* | length.* | num.keys | total.length]. length.k sums the value
// lengths over repeated keys; total.length covers the values of every
// well-formed pair, including keys outside the vocabulary.
std::vector<double> extract_payload_features(std::string_view full_payload,
                                             const FeatureVocabulary& vocab,
                                             EncodeDiagnostics* diag = nullptr);

// [isValidURL | numDir | lengthDir | lengthFile | ext.*]
std::vector<double> extract_url_features(std::string_view url, const FeatureVocabulary& vocab,
                                         EncodeDiagnostics* diag = nullptr);

std::vector<double> encode_session(const Session& session, const FeatureVocabulary& vocab,
                                   EncodeDiagnostics* diag = nullptr);

Dataset encode_sessions(const std::vector<Session>& sessions, const FeatureVocabulary& vocab,
                        EncodeDiagnostics* diag = nullptr);

} // namespace websift
