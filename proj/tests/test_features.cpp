#include <doctest.h>

#include "websift/errors.hpp"
#include "websift/features.hpp"

#include <algorithm>

using namespace websift;

namespace {

Session make_session(std::string payload, std::string url, std::string method = "GET",
                     TraceLabel label = TraceLabel::normal) {
    RawHttpRecord rec;
    rec.method = std::move(method);
    rec.url = std::move(url);
    rec.payload = payload;
    rec.cookie = "C";
    rec.label = label;
    Session s;
    s.session_id = "C";
    s.records = {rec};
    s.full_payload = std::move(payload);
    s.label = label;
    return s;
}

FeatureVocabulary fixed_vocab() {
    FeatureVocabulary vocab;
    vocab.payload_keys = {"B2",    "cantidad", "precio", "provincia"};
    vocab.url_extensions = {"gif", "jsp", "old"};
    vocab.method_values = {"GET", "POST", "PUT"};
    return vocab;
}

double value_of(const FeatureVocabulary& vocab, const std::vector<double>& row,
                const std::string& name) {
    auto names = vocab.column_names();
    auto it = std::find(names.begin(), names.end(), name);
    REQUIRE(it != names.end());
    return row[static_cast<std::size_t>(it - names.begin())];
}

} // namespace

TEST_CASE("payload splitting follows the Key=Value & grammar") {
    auto pairs = split_payload_pairs("a=1&b=22&malformed&c=");
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].key == "a");
    CHECK(pairs[0].value == "1");
    CHECK(pairs[1].value == "22");
    CHECK(pairs[2].key == "c");
    CHECK(pairs[2].value == "");
    CHECK(split_payload_pairs("").empty());
    CHECK(split_payload_pairs("no-equals-here").empty());
}

TEST_CASE("url decomposition") {
    const std::string base = "http://localhost:8080/";

    SUBCASE("worked example with two directories and a jsp file") {
        UrlParts parts = decompose_url("http://localhost:8080/tienda1/miembros/editar.jsp", base);
        CHECK(parts.valid);
        CHECK(parts.num_dirs == 2);
        CHECK(parts.length_dirs == 15);
        CHECK(parts.length_file == 6);
        CHECK(parts.extension == "jsp");
    }
    SUBCASE("zero-directory resource") {
        UrlParts parts = decompose_url("http://localhost:8080/x.old", base);
        CHECK(parts.valid);
        CHECK(parts.num_dirs == 0);
        CHECK(parts.length_dirs == 0);
        CHECK(parts.length_file == 1);
        CHECK(parts.extension == "old");
    }
    SUBCASE("off-base and extensionless URLs are invalid") {
        CHECK_FALSE(decompose_url("http://evil.example/x.jsp", base).valid);
        CHECK_FALSE(decompose_url("http://localhost:8080/tienda1/file", base).valid);
        CHECK_FALSE(decompose_url("http://localhost:8080/", base).valid);
        CHECK_FALSE(decompose_url("", base).valid);
        CHECK_FALSE(decompose_url("http://localhost:8080/dir/file.", base).valid);
    }
    SUBCASE("extension is lowercased") {
        CHECK(decompose_url("http://localhost:8080/a/B.JSP", base).extension == "jsp");
    }
}

TEST_CASE("vocabulary building collects keys, extensions and methods") {
    std::vector<Session> sessions = {
        make_session("a=1&b=22", "http://localhost:8080/t/x.jsp", "GET"),
        make_session("b=3&c=", "http://localhost:8080/y.gif", "POST"),
        make_session("", "http://off-base/z.png", "GET"),
    };
    ExtractConfig config;
    FeatureVocabulary vocab = build_vocabulary(sessions, config);
    CHECK(vocab.payload_keys == std::vector<std::string>{"a", "b", "c"});
    CHECK(vocab.url_extensions == std::vector<std::string>{"gif", "jsp"}); // png is off-base
    CHECK(vocab.method_values == std::vector<std::string>{"GET", "POST"});

    SUBCASE("all-empty payloads give an empty key vocabulary") {
        std::vector<Session> empties = {make_session("", "http://localhost:8080/x.jsp")};
        CHECK(build_vocabulary(empties, config).payload_keys.empty());
    }
    SUBCASE("zero sessions violate the precondition") {
        CHECK_THROWS_AS(build_vocabulary({}, config), DataError);
    }
}

TEST_CASE("method one-hot is lexicographic with all-zeros for unseen tokens") {
    FeatureVocabulary vocab = fixed_vocab();
    CHECK(encode_method("GET", vocab) == std::vector<double>{1, 0, 0});
    CHECK(encode_method("PUT", vocab) == std::vector<double>{0, 0, 1});
    EncodeDiagnostics diag;
    CHECK(encode_method("HEAD", vocab, &diag) == std::vector<double>{0, 0, 0});
    CHECK(diag.unseen_methods == 1);
}

TEST_CASE("payload feature block reproduces the worked example") {
    FeatureVocabulary vocab = fixed_vocab();
    // key.* block: B2, cantidad, precio, provincia (lexicographic)
    auto block = extract_payload_features("provincia=Zaragoza&B2=Pago+y+envio&cantidad=3", vocab);
    // layout: 4 key flags, 4 lengths, num.keys, total.length
    REQUIRE(block.size() == 10);
    CHECK(block[0] == 1.0);  // key.B2
    CHECK(block[1] == 1.0);  // key.cantidad
    CHECK(block[2] == 0.0);  // key.precio
    CHECK(block[3] == 1.0);  // key.provincia
    CHECK(block[7] == 8.0);  // length.provincia = len("Zaragoza")
    CHECK(block[8] == 3.0);  // num.keys
    CHECK(block[9] == 8.0 + 12.0 + 1.0); // total.length over all values
}

TEST_CASE("payload block edge cases") {
    FeatureVocabulary vocab = fixed_vocab();

    SUBCASE("empty payload is all zeros") {
        auto block = extract_payload_features("", vocab);
        for (double v : block) CHECK(v == 0.0);
    }
    SUBCASE("repeated keys keep presence 1 and sum their value lengths") {
        FeatureVocabulary tiny;
        tiny.payload_keys = {"a"};
        auto block = extract_payload_features("a=xy&a=z", tiny);
        REQUIRE(block.size() == 4);
        CHECK(block[0] == 1.0); // key.a
        CHECK(block[1] == 3.0); // length.a = 2 + 1
        CHECK(block[2] == 1.0); // num.keys
        CHECK(block[3] == 3.0); // total.length
    }
    SUBCASE("unseen keys count toward total.length only") {
        FeatureVocabulary tiny;
        tiny.payload_keys = {"a"};
        EncodeDiagnostics diag;
        auto block = extract_payload_features("a=x&zz=abcd", tiny, &diag);
        CHECK(block[0] == 1.0);
        CHECK(block[1] == 1.0);
        CHECK(block[2] == 1.0); // num.keys counts vocabulary keys only
        CHECK(block[3] == 5.0); // 1 + 4
        CHECK(diag.unseen_payload_keys == 1);
    }
    SUBCASE("malformed fragments contribute nothing, not even to total.length") {
        FeatureVocabulary tiny;
        tiny.payload_keys = {"a"};
        auto block = extract_payload_features("a=x&garbagefragment", tiny);
        CHECK(block[3] == 1.0);
    }
}

TEST_CASE("url feature block zero-propagates on invalid URLs") {
    FeatureVocabulary vocab = fixed_vocab();

    auto valid = extract_url_features("http://localhost:8080/tienda1/miembros/editar.jsp", vocab);
    // layout: isValidURL, numDir, lengthDir, lengthFile, ext.gif, ext.jsp, ext.old
    REQUIRE(valid.size() == 7);
    CHECK(valid[0] == 1.0);
    CHECK(valid[1] == 2.0);
    CHECK(valid[2] == 15.0);
    CHECK(valid[3] == 6.0);
    CHECK(valid[5] == 1.0); // ext.jsp

    auto invalid = extract_url_features("ftp://nowhere/at.all", vocab);
    for (double v : invalid) CHECK(v == 0.0);

    EncodeDiagnostics diag;
    auto unseen = extract_url_features("http://localhost:8080/q.png", vocab, &diag);
    CHECK(unseen[0] == 1.0);
    CHECK(diag.unseen_extensions == 1);
    double ext_sum = unseen[4] + unseen[5] + unseen[6];
    CHECK(ext_sum == 0.0);
}

TEST_CASE("session encoding composes the blocks in schema order") {
    FeatureVocabulary vocab = fixed_vocab();
    vocab.passthrough = {{"contentLength", true, {}}, {"mode", false, {"fast", "slow"}}};

    Session s = make_session("provincia=Zaragoza&B2=Pago+y+envio&cantidad=3",
                             "http://localhost:8080/tienda1/miembros/editar.jsp");
    s.records[0].extras = {{"contentLength", "123"}, {"mode", "slow"}};

    auto row = encode_session(s, vocab);
    REQUIRE(row.size() == vocab.width());
    CHECK(value_of(vocab, row, "method.GET") == 1.0);
    CHECK(value_of(vocab, row, "key.provincia") == 1.0);
    CHECK(value_of(vocab, row, "length.provincia") == 8.0);
    CHECK(value_of(vocab, row, "num.keys") == 3.0);
    CHECK(value_of(vocab, row, "isValidURL") == 1.0);
    CHECK(value_of(vocab, row, "numDir") == 2.0);
    CHECK(value_of(vocab, row, "lengthDir") == 15.0);
    CHECK(value_of(vocab, row, "lengthFile") == 6.0);
    CHECK(value_of(vocab, row, "ext.jsp") == 1.0);
    CHECK(value_of(vocab, row, "contentLength") == 123.0);
    CHECK(value_of(vocab, row, "mode.slow") == 1.0);
    CHECK(value_of(vocab, row, "mode.fast") == 0.0);

    SUBCASE("missing passthrough imputes zero and is counted") {
        s.records[0].extras.clear();
        EncodeDiagnostics diag;
        auto imputed = encode_session(s, vocab, &diag);
        CHECK(value_of(vocab, imputed, "contentLength") == 0.0);
        CHECK(diag.missing_passthrough == 2);
    }
}

TEST_CASE("schema width matches the block arithmetic") {
    SUBCASE("19 keys, 24 extensions, 3 methods, 7 passthroughs give width 78") {
        FeatureVocabulary vocab;
        for (int i = 0; i < 19; ++i) vocab.payload_keys.push_back("k" + std::to_string(i));
        for (int i = 0; i < 24; ++i) vocab.url_extensions.push_back("e" + std::to_string(i));
        vocab.method_values = {"GET", "POST", "PUT"};
        for (int i = 0; i < 7; ++i) vocab.passthrough.push_back({"p" + std::to_string(i), true, {}});
        CHECK(vocab.width() == 78);
    }
    SUBCASE("empty vocabulary degenerates to the six summary columns") {
        FeatureVocabulary vocab;
        CHECK(vocab.width() == 6);
        Session s = make_session("a=1", "nowhere");
        auto row = encode_session(s, vocab);
        REQUIRE(row.size() == 6);
        CHECK(row[0] == 0.0); // num.keys: no vocabulary keys
        CHECK(row[1] == 1.0); // total.length still counts the value
    }
}

TEST_CASE("encoding is deterministic and schema-stable") {
    std::vector<Session> sessions = {
        make_session("a=1&b=22", "http://localhost:8080/t/x.jsp", "GET"),
        make_session("b=3", "http://localhost:8080/y.gif", "POST", TraceLabel::attack),
    };
    ExtractConfig config;
    config.passthrough_names = {"h"};
    FeatureVocabulary vocab = build_vocabulary(sessions, config);

    Dataset a = encode_sessions(sessions, vocab);
    Dataset b = encode_sessions(sessions, vocab);
    CHECK(a.values == b.values);
    CHECK(a.columns == b.columns);
    CHECK(a.labels == std::vector<int>{0, 1});
    CHECK(a.schema_fingerprint() == b.schema_fingerprint());
}

TEST_CASE("per-row consistency: num.keys and total.length match their sums") {
    std::vector<Session> sessions;
    sessions.push_back(make_session("a=1&b=22&c=333", "http://localhost:8080/x.jsp"));
    sessions.push_back(make_session("a=&a=zz&d=4", "bad-url"));
    sessions.push_back(make_session("", "http://localhost:8080/d/e/f.old"));
    ExtractConfig config;
    FeatureVocabulary vocab = build_vocabulary(sessions, config);
    Dataset data = encode_sessions(sessions, vocab);

    auto names = vocab.column_names();
    for (std::size_t r = 0; r < data.rows(); ++r) {
        double key_sum = 0.0, length_sum = 0.0, num_keys = 0.0, total_length = 0.0;
        double is_valid = 1.0, url_block_sum = 0.0;
        for (std::size_t c = 0; c < names.size(); ++c) {
            const std::string& n = names[c];
            double v = data.at(r, c);
            if (n.rfind("key.", 0) == 0) key_sum += v;
            else if (n.rfind("length.", 0) == 0) length_sum += v;
            else if (n == "num.keys") num_keys = v;
            else if (n == "total.length") total_length = v;
            else if (n == "isValidURL") is_valid = v;
            else if (n == "numDir" || n == "lengthDir" || n == "lengthFile" ||
                     n.rfind("ext.", 0) == 0)
                url_block_sum += v;
        }
        CHECK(num_keys == key_sum);
        // Vocabulary fit on the same sessions, so no unseen keys exist and
        // the totals coincide.
        CHECK(total_length == length_sum);
        if (is_valid == 0.0) CHECK(url_block_sum == 0.0);
    }
}

TEST_CASE("vocabulary manifest round-trips and rejects tampering") {
    FeatureVocabulary vocab = fixed_vocab();
    vocab.passthrough = {{"h", true, {}}, {"m", false, {"x", "y"}}};
    std::string json = vocab.to_json_string();
    FeatureVocabulary back = FeatureVocabulary::from_json_string(json);
    CHECK(back.column_names() == vocab.column_names());
    CHECK(back.fingerprint() == vocab.fingerprint());

    std::string corrupted = json;
    std::size_t pos = corrupted.find("provincia");
    corrupted.replace(pos, 9, "provinciX");
    CHECK_THROWS_AS(FeatureVocabulary::from_json_string(corrupted), SchemaError);
}
