#pragma once

#include <cstdint>
#include <vector>

#include "pbss/linalg.hpp"

namespace pbss {

/// One BPSK emitter: a repeating +/-1 symbol sequence, rectangular NRZ,
/// on a sinusoidal carrier. Signals are closed-form evaluated at arbitrary
/// time, so arbitrarily sparse sampling is exact and nothing is precomputed.
struct SourceSignal {
    std::vector<std::int8_t> bits;  // entries are -1 or +1
    double baud_rate = 0.0;         // symbols / second
    double carrier_freq = 0.0;      // Hz
    double carrier_phase = 0.0;     // radians
    double amplitude = 0.0;

    /// Duration of one full repetition of the bit sequence.
    double period() const { return static_cast<double>(bits.size()) / baud_rate; }
};

/// Deterministic BPSK source from a 64-bit seed. Amplitude is sqrt(2) so the
/// time-averaged variance over whole sequence periods is 1.
SourceSignal make_bpsk_source(std::uint64_t seed, std::size_t n_bits, double baud_hz,
                              double carrier_hz, double phase_rad = 0.0);

/// Instantaneous source value at time t (seconds).
double eval_source(const SourceSignal& s, double t);

/// Independent sources plus the linear mixing applied by the channel.
/// Ground truth for every experiment.
struct MixingScenario {
    std::vector<SourceSignal> sources;
    Matrix mixing;  // l x n

    MixingScenario(std::vector<SourceSignal> src, Matrix m);

    std::size_t source_count() const { return sources.size(); }
    std::size_t received_count() const { return mixing.rows; }
};

/// Received vector r(t) = M s(t).
Vec eval_received(const MixingScenario& sc, double t);

}  // namespace pbss
