#include "websift/synth.hpp"

#include "websift/csv.hpp"
#include "websift/errors.hpp"
#include "websift/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace websift {

namespace {

const std::vector<std::string> kPayloadKeys = {
    "id",     "login",    "password", "email", "nombre",   "apellidos", "direccion",
    "ciudad", "cp",       "provincia", "ntc",  "B1",       "B2",        "modo",
    "precio", "cantidad", "tarjeta",  "dni",   "telefono"};

const std::vector<std::string> kWords = {
    "Zaragoza", "Madrid",  "Burgos",  "Sevilla", "Granada", "pago",   "envio",
    "Vaqueros", "Camisa",  "Zapatos", "Jardin",  "Castillo", "Rioja", "Leon"};

const std::vector<std::string> kDirs = {"tienda1", "publico", "miembros", "imagenes", "global"};
const std::vector<std::string> kFiles = {"index",  "editar", "pagar",  "entrar",
                                         "registro", "carrito", "titulo", "estilo"};
const std::vector<std::string> kCommonExts = {"jsp", "gif", "css", "js", "png", "html", "htm"};
const std::vector<std::string> kRareExts = {"old", "bak", "ini", "cfg", "tmp"};

const std::vector<std::string> kInjectionBits = {
    "%27+OR+%271%27%3D%271", "<script>alert(1)</script>", "..%2F..%2Fetc%2Fpasswd",
    "UNION+SELECT+NULL--", "%3Bcat+%2Fetc%2Fshadow"};

const std::vector<std::string> kPassthroughNames = {
    "contentLength", "headerCount", "bodyBytes", "uaLength",
    "acceptLength",  "hostLength",  "reqDepth"};

// The bulk-data payload key every session carries; oversized values and the
// rare giant uploads both land here, so its length feature (and
// total.length) is heavy-tailed.
const std::string kBulkKey = "B1";

std::string random_token(Rng& rng, std::size_t length) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string out;
    out.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
        out.push_back(alphabet[rng.below(sizeof(alphabet) - 1)]);
    return out;
}

std::string plain_value(Rng& rng) {
    if (rng.bernoulli(0.5)) return kWords[rng.below(kWords.size())];
    return random_token(rng, 3 + rng.below(10));
}

// Value of the requested length; attack oversize embeds injection-looking
// fragments, benign oversize is bulky shop text. Extraction only sees
// lengths, so the content itself carries no label signal.
std::string sized_value(Rng& rng, std::size_t target, bool attack) {
    std::string out;
    while (out.size() < target) {
        if (attack && rng.bernoulli(0.6))
            out += kInjectionBits[rng.below(kInjectionBits.size())];
        else
            out += kWords[rng.below(kWords.size())];
        out.push_back('+');
    }
    out.resize(target);
    return out;
}

std::string format_int(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", std::max(0.0, std::round(v)));
    return buf;
}

} // namespace

const std::vector<std::string>& synth_passthrough_names() { return kPassthroughNames; }

void generate_synthetic_trace(std::ostream& out, const SynthOptions& options) {
    if (options.n_sessions < 10) throw DataError("synth: need at least 10 sessions");
    if (options.attack_fraction < 0.0 || options.attack_fraction > 1.0)
        throw DataError("synth: attack fraction must be in [0, 1]");

    const std::size_t n = options.n_sessions;
    const std::size_t n_attack = static_cast<std::size_t>(
        std::llround(options.attack_fraction * static_cast<double>(n)));

    Rng rng(derive_seed(options.seed, "synth-trace"));
    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n_attack; ++i) labels[i] = 1;
    rng.shuffle(labels);

    std::vector<std::string> header = {"method", "url", "payload", "cookie", "label"};
    for (const auto& name : kPassthroughNames) header.push_back(name);
    write_csv_row(out, header);

    std::vector<std::string> fields;
    for (std::size_t s = 0; s < n; ++s) {
        const bool attack = labels[s] != 0;

        // Planted concept: an attack session shows exactly one of
        // {oversized payload, oversized URL path}; a normal session shows
        // both or neither. The slight arm asymmetry leaves each marker a
        // whisper of marginal signal on its own.
        bool oversized_payload, oversized_path;
        if (attack) {
            oversized_payload = rng.bernoulli(0.6);
            oversized_path = !oversized_payload;
        } else {
            oversized_payload = oversized_path = rng.bernoulli(0.45);
        }

        // Payload: the bulk key plus a few shop fields. Attacks tend to
        // carry one more field than normal traffic.
        std::size_t n_keys = (attack ? 2 : 1) + rng.below(4);
        std::vector<std::string> pairs;
        {
            std::size_t bulk_len;
            if (rng.bernoulli(0.01))
                bulk_len = 20000 + rng.below(30001); // giant upload, either class
            else if (oversized_payload)
                bulk_len = 150 + rng.below(71);
            else
                bulk_len = 2 + rng.below(9);
            pairs.push_back(kBulkKey + "=" + sized_value(rng, bulk_len, attack));
        }
        std::vector<int> key_idx = rng.sample_without_replacement(
            static_cast<int>(kPayloadKeys.size()), static_cast<int>(n_keys));
        for (int k : key_idx) {
            const std::string& key = kPayloadKeys[static_cast<std::size_t>(k)];
            if (key == kBulkKey) continue;
            pairs.push_back(key + "=" + plain_value(rng));
        }

        // URL: always shaped <base>/<dirs>/<file>.<ext>; the path carrier
        // lives in the directory-name lengths.
        std::string url = "http://localhost:8080/";
        {
            std::size_t dir_budget;
            if (rng.bernoulli(0.01))
                dir_budget = 15000 + rng.below(30001); // pathological crawler path
            else if (oversized_path)
                dir_budget = 150 + rng.below(71);
            else
                dir_budget = 0; // plain catalogue directories
            std::size_t depth = 1 + rng.below(3);
            if (dir_budget == 0) {
                for (std::size_t d = 0; d < depth; ++d)
                    url += kDirs[rng.below(kDirs.size())] + "/";
            } else {
                std::size_t per_dir = dir_budget / depth;
                for (std::size_t d = 0; d < depth; ++d)
                    url += random_token(rng, std::max<std::size_t>(1, per_dir)) + "/";
            }
            url += kFiles[rng.below(kFiles.size())] + "." +
                   kCommonExts[rng.below(kCommonExts.size())];
        }
        // Label-independent decorations so odd-looking URLs appear in both
        // classes: rare extensions and off-base requests.
        if (rng.bernoulli(0.06)) {
            std::size_t dot = url.rfind('.');
            url = url.substr(0, dot + 1) + kRareExts[rng.below(kRareExts.size())];
        }
        if (rng.bernoulli(0.03))
            url = "http://" + random_token(rng, 8) + ".example/" +
                  kFiles[rng.below(kFiles.size())];

        double roll = rng.uniform();
        std::string method = roll < 0.70 ? "GET" : (roll < 0.95 ? "POST" : "PUT");
        std::string cookie = "S" + std::to_string(s) + "-" + random_token(rng, 6);
        std::string label = attack ? "attack" : "normal";

        // Weak additive signal for the baselines: slightly higher header and
        // content-length statistics on attacks.
        double content_length = std::exp(rng.normal() * 0.5 + (attack ? 4.45 : 4.0));
        double header_count = rng.normal() * 3.0 + (attack ? 12.0 : 10.0);
        std::vector<std::string> passthrough = {
            format_int(content_length),
            format_int(std::max(1.0, header_count)),
            format_int(std::exp(rng.normal() * 1.0 + 5.0)),
            format_int(rng.normal() * 15.0 + 60.0),
            format_int(rng.normal() * 10.0 + 40.0),
            format_int(14.0 + static_cast<double>(rng.below(6))),
            format_int(1.0 + static_cast<double>(rng.below(5))),
        };

        // Spread the payload pairs over the session's records.
        std::size_t n_records =
            1 + rng.below(static_cast<std::uint64_t>(options.max_records_per_session));
        std::vector<std::string> record_payloads(n_records);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            std::string& slot = record_payloads[i % n_records];
            if (!slot.empty()) slot.push_back('&');
            slot += pairs[i];
        }

        for (std::size_t r = 0; r < n_records; ++r) {
            fields.clear();
            fields.push_back(method);
            fields.push_back(url);
            fields.push_back(record_payloads[r]);
            fields.push_back(cookie);
            fields.push_back(label);
            for (const auto& v : passthrough) fields.push_back(v);
            write_csv_row(out, fields);
        }
    }
}

} // namespace websift
