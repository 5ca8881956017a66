#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbss/demod.hpp"
#include "pbss/engine.hpp"

namespace pbss {

struct ExperimentRecord {
    std::string mixing_label;
    double f_s = 0.0;
    std::uint32_t n_s = 0;
    double s2_snr_db = 0.0;
    double k_snr_db = 0.0;
    int success_count = 0;
    int trials = 0;
};

struct QualityRow {
    double f_s = 0.0;
    std::uint32_t n_s = 0;
    std::string stat;  // S2, K, S2_random, K_random, S2_iid_pred
    double mean = 0.0;
    double std = 0.0;
    double snr_db = 0.0;
    int repeats = 0;
};

struct LabeledMixing {
    std::string label;
    Matrix mixing;
};

struct SweepConfig {
    std::vector<double> f_s_grid;
    std::vector<std::uint32_t> n_s_grid;
    int trials = 32;
    int snr_repeats = 32;
    Vec snr_currents_mA = {0.0, 3.0};  // high-variance reference point
    std::uint64_t seed = 0;

    /// Trimmed 5x5 grid keeping sweep runtime at minutes scale.
    static SweepConfig desk_preset();
    /// All 12 power-of-two rates from 960 kHz to 1.966 GHz crossed with
    /// n_s from 2^8 to 2^16.
    static SweepConfig full_grid();
};

/// Success rate and estimator SNR per (mixing, f_s, n_s) cell: measures the
/// S^2 / K estimator quality at the reference point, then runs `trials`
/// independently-seeded PBSS attempts and counts demodulation successes.
/// Cells and trials run in parallel; records are ordered by (mixing, cell).
std::vector<ExperimentRecord> sweep_success_vs_snr(const std::vector<SourceSignal>& sources,
                                                   const std::vector<LabeledMixing>& mixings,
                                                   const WeightBank& bank, const PbssConfig& pbss,
                                                   const SweepConfig& sweep);

/// Estimator consistency curves: the f_s sweep at n_s = 2048 and the n_s
/// sweep at f_s = 7.68 MSPS, for periodic and random sampling, plus the
/// IID-sampling prediction of the S^2 estimator spread.
std::vector<QualityRow> sweep_estimator_quality(const MixingScenario& scenario,
                                                const WeightBank& bank,
                                                const SweepConfig& sweep);

std::string to_csv(const std::vector<ExperimentRecord>& records);
std::string to_csv(const std::vector<QualityRow>& rows);

/// Weight-vs-current curve for every ring: columns ring, i_mA, weight.
std::string transfer_curve_csv(const WeightBank& bank, int points = 256);

}  // namespace pbss
