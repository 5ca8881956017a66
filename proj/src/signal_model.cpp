#include "pbss/signal_model.hpp"

#include <cmath>
#include <stdexcept>

#include "pbss/rng.hpp"

namespace pbss {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

SourceSignal make_bpsk_source(std::uint64_t seed, std::size_t n_bits, double baud_hz,
                              double carrier_hz, double phase_rad) {
    if (n_bits < 1) throw std::invalid_argument("make_bpsk_source: n_bits must be >= 1");
    if (!(baud_hz > 0.0)) throw std::invalid_argument("make_bpsk_source: baud must be > 0");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("make_bpsk_source: carrier must be > 0");

    SourceSignal s;
    s.bits.resize(n_bits);
    for (std::size_t j = 0; j < n_bits; ++j)
        s.bits[j] = (mix64(seed, j) >> 63) ? std::int8_t{1} : std::int8_t{-1};
    s.baud_rate = baud_hz;
    s.carrier_freq = carrier_hz;
    s.carrier_phase = phase_rad;
    // unit variance: E[(A b cos)^2] = A^2 / 2 over whole periods
    s.amplitude = std::sqrt(2.0);
    return s;
}

double eval_source(const SourceSignal& s, double t) {
    const auto n = static_cast<std::int64_t>(s.bits.size());
    std::int64_t idx = static_cast<std::int64_t>(std::floor(t * s.baud_rate)) % n;
    if (idx < 0) idx += n;
    const double chip = s.bits[static_cast<std::size_t>(idx)];
    // Reduce the carrier argument to one cycle before the multiply by 2*pi;
    // at GHz carriers the raw phase reaches 1e10 rad where cos() falls onto
    // its slow reduction path.
    const double cycles = s.carrier_freq * t;
    const double frac = cycles - std::floor(cycles);
    return s.amplitude * chip * std::cos(kTwoPi * frac + s.carrier_phase);
}

MixingScenario::MixingScenario(std::vector<SourceSignal> src, Matrix m)
    : sources(std::move(src)), mixing(std::move(m)) {
    if (sources.empty()) throw std::invalid_argument("MixingScenario: no sources");
    if (mixing.cols != sources.size())
        throw std::invalid_argument("MixingScenario: mixing columns must match source count");
    if (mixing.rows < mixing.cols)
        throw std::invalid_argument("MixingScenario: need at least as many received signals as sources");
    for (const auto& s : sources)
        for (auto b : s.bits)
            if (b != 1 && b != -1) throw std::invalid_argument("MixingScenario: bits must be +/-1");
    if (mixing.square() && std::fabs(determinant(mixing)) <= 1e-12)
        throw std::invalid_argument("MixingScenario: mixing matrix must be nonsingular");
}

Vec eval_received(const MixingScenario& sc, double t) {
    Vec s(sc.sources.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = eval_source(sc.sources[i], t);
    return matvec(sc.mixing, s);
}

}  // namespace pbss
