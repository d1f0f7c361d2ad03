#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace websift {

struct SynthOptions {
    std::size_t n_sessions = 2000;
    double attack_fraction = 0.683; // mirrors the processed corpus class ratio
    std::uint64_t seed = 7;
    int max_records_per_session = 4;
};

// Writes a synthetic HTTP trace in the default delimited layout
// (method,url,payload,cookie,label + seven numeric pass-through columns).
//
// The attack concept is deliberately non-linear: an attack session shows
// exactly one of {oversized payload value, suspicious URL}, while normal
// sessions show neither or both in equal measure, so each marker alone is
// uninformative and only their interaction separates the classes. Two weak
// additive shifts (key count, header statistics) keep linear and distance
// baselines clearly above chance but well below the tree ensembles.
void generate_synthetic_trace(std::ostream& out, const SynthOptions& options);

// Pass-through column names emitted by the generator, in schema order.
const std::vector<std::string>& synth_passthrough_names();

} // namespace websift
