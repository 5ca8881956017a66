#pragma once

#include <vector>

#include "pbss/engine.hpp"
#include "pbss/signal_model.hpp"
#include "pbss/weight_bank.hpp"

namespace pbss {

struct DemodReport {
    int source_index = 0;
    int bit_errors = 0;
    int alignment_offset = 0;  // circular symbol offset giving the minimum
    int polarity = 1;          // +1 or -1
    double phase_used = 0.0;   // trial carrier phase, radians
};

/// Coherent BPSK demodulation against a known source. Samples the probe
/// densely over one full bit-sequence period, mixes down with the known
/// carrier over a grid of trial phases, integrates per symbol, and takes
/// the minimum bit-error count over (phase, circular offset, polarity).
DemodReport demodulate(const MixedSignalProbe& probe, const SourceSignal& source,
                       int source_index = 0, double t_start = 0.0,
                       int samples_per_cycle = 16, int n_phases = 16);

struct SuccessReport {
    bool success = false;
    std::vector<DemodReport> assigned;  // one per source, in source order
    std::vector<int> ic_of_source;      // which final IC each source claimed
};

/// A run succeeds when every source demodulates with zero bit errors through
/// some final IC, with distinct ICs claimed by distinct sources (greedy
/// assignment by fewest errors).
SuccessReport pbss_success_report(const PbssResult& result, const MixingScenario& scenario,
                                  const WeightBank& bank, double t_start = 0.0);

bool pbss_success(const PbssResult& result, const MixingScenario& scenario,
                  const WeightBank& bank, double t_start = 0.0);

}  // namespace pbss
