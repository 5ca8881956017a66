#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbss/engine.hpp"
#include "pbss/sweeps.hpp"

namespace pbss {

/// Recipe for one source; bits are generated from the seed on demand.
struct SourceSpec {
    std::uint64_t seed = 1;
    std::uint32_t n_bits = 1137;
    double baud_hz = 200e6;
    double carrier_hz = 1e9;
    double phase_rad = 0.0;

    SourceSignal build() const;
};

/// Everything an experiment needs, loadable from one JSON document.
struct AppConfig {
    std::vector<SourceSpec> sources;
    Matrix mixing;
    std::string mixing_label = "m1";
    std::vector<LabeledMixing> sweep_mixings;
    WeightBank bank;
    PbssConfig pbss;
    SweepConfig sweep;
    std::uint64_t seed = 0;

    AppConfig();

    MixingScenario scenario() const;
    std::vector<SourceSignal> built_sources() const;
};

/// The paper-matched defaults: two 1137-bit 200 MBaud BPSK sources with
/// carriers offset from 1 GHz by 176 kHz in opposite directions, the
/// symmetric-interference mixing, and two a=0.5 rings with i0 = 2 mA.
AppConfig default_config();

Matrix mixing_symmetric();  // [[0.6, 0.4], [0.4, 0.6]], label m1
Matrix mixing_jamming();    // [[1, 0.5], [1, 0.2]],     label m2

AppConfig load_config(const std::string& path);
AppConfig config_from_json_text(const std::string& text);

std::string result_to_json(const PbssResult& result);
std::string latency_table_json(const AppConfig& cfg, const CycleOverheads& overheads);
std::string latency_table_csv(const AppConfig& cfg, const CycleOverheads& overheads);

std::string records_to_json(const std::vector<ExperimentRecord>& records);
std::string quality_rows_to_json(const std::vector<QualityRow>& rows);

}  // namespace pbss
