#include "pbss/demod.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace pbss {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

DemodReport demodulate(const MixedSignalProbe& probe, const SourceSignal& source,
                       int source_index, double t_start, int samples_per_cycle,
                       int n_phases) {
    if (samples_per_cycle < 4) throw std::invalid_argument("demodulate: too few samples per cycle");
    if (n_phases < 1) throw std::invalid_argument("demodulate: need at least one trial phase");

    const int n_bits = static_cast<int>(source.bits.size());
    const double t_sym = 1.0 / source.baud_rate;
    // Align to a symbol boundary so per-symbol integrals are clean.
    const double t0 = std::ceil(t_start * source.baud_rate) / source.baud_rate;
    const int per_sym =
        static_cast<int>(std::ceil(samples_per_cycle * source.carrier_freq / source.baud_rate));

    // The mixed signal is the expensive part; evaluate it once.
    std::vector<double> m(static_cast<std::size_t>(n_bits) * per_sym);
    std::vector<double> t(m.size());
    for (int k = 0; k < n_bits; ++k)
        for (int j = 0; j < per_sym; ++j) {
            const std::size_t idx = static_cast<std::size_t>(k) * per_sym + j;
            t[idx] = t0 + (k + (j + 0.5) / per_sym) * t_sym;
            m[idx] = eval_mixed(probe, t[idx]);
        }

    DemodReport best;
    best.source_index = source_index;
    best.bit_errors = n_bits + 1;

    std::vector<std::int8_t> decisions(n_bits);
    for (int p = 0; p < n_phases; ++p) {
        const double phase = kTwoPi * p / n_phases;
        for (int k = 0; k < n_bits; ++k) {
            double corr = 0.0;
            for (int j = 0; j < per_sym; ++j) {
                const std::size_t idx = static_cast<std::size_t>(k) * per_sym + j;
                corr += m[idx] * std::cos(kTwoPi * source.carrier_freq * t[idx] + phase);
            }
            decisions[k] = corr >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
        }
        for (int offset = 0; offset < n_bits; ++offset) {
            int score = 0;
            for (int k = 0; k < n_bits; ++k)
                score += decisions[k] * source.bits[(k + offset) % n_bits];
            const int errors_pos = (n_bits - score) / 2;
            const int errors_neg = n_bits - errors_pos;
            const int errors = errors_pos <= errors_neg ? errors_pos : errors_neg;
            if (errors < best.bit_errors) {
                best.bit_errors = errors;
                best.alignment_offset = offset;
                best.polarity = errors_pos <= errors_neg ? 1 : -1;
                best.phase_used = phase;
                if (errors == 0) return best;
            }
        }
    }
    return best;
}

SuccessReport pbss_success_report(const PbssResult& result, const MixingScenario& scenario,
                                  const WeightBank& bank, double t_start) {
    const std::size_t n_src = scenario.source_count();
    const std::size_t n_ic = result.ics_final.size();
    SuccessReport rep;
    if (n_ic < n_src) return rep;

    std::vector<std::vector<DemodReport>> errors(n_src, std::vector<DemodReport>(n_ic));
    for (std::size_t ic = 0; ic < n_ic; ++ic) {
        const MixedSignalProbe probe(scenario, bank, result.ics_final[ic]);
        for (std::size_t s = 0; s < n_src; ++s)
            errors[s][ic] = demodulate(probe, scenario.sources[s], static_cast<int>(s), t_start);
    }

    // Greedy assignment: repeatedly claim the (source, IC) pair with the
    // fewest errors; an IC may serve only one source.
    std::vector<bool> src_done(n_src, false), ic_used(n_ic, false);
    rep.assigned.resize(n_src);
    rep.ic_of_source.assign(n_src, -1);
    for (std::size_t round = 0; round < n_src; ++round) {
        int best_err = std::numeric_limits<int>::max();
        std::size_t bs = 0, bi = 0;
        for (std::size_t s = 0; s < n_src; ++s) {
            if (src_done[s]) continue;
            for (std::size_t ic = 0; ic < n_ic; ++ic) {
                if (ic_used[ic]) continue;
                if (errors[s][ic].bit_errors < best_err) {
                    best_err = errors[s][ic].bit_errors;
                    bs = s;
                    bi = ic;
                }
            }
        }
        src_done[bs] = true;
        ic_used[bi] = true;
        rep.assigned[bs] = errors[bs][bi];
        rep.ic_of_source[bs] = static_cast<int>(bi);
    }
    rep.success = true;
    for (const auto& r : rep.assigned)
        if (r.bit_errors != 0) rep.success = false;
    return rep;
}

bool pbss_success(const PbssResult& result, const MixingScenario& scenario,
                  const WeightBank& bank, double t_start) {
    return pbss_success_report(result, scenario, bank, t_start).success;
}

}  // namespace pbss
