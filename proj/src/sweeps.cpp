#include "pbss/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pbss/parallel.hpp"
#include "pbss/rng.hpp"

namespace pbss {

SweepConfig SweepConfig::desk_preset() {
    SweepConfig s;
    s.f_s_grid = {0.96e6, 7.68e6, 61.44e6, 491.52e6, 1966.08e6};
    s.n_s_grid = {1u << 8, 1u << 10, 1u << 12, 1u << 14, 1u << 16};
    return s;
}

SweepConfig SweepConfig::full_grid() {
    SweepConfig s;
    s.f_s_grid.clear();
    for (int i = 0; i < 12; ++i) s.f_s_grid.push_back(0.96e6 * std::pow(2.0, i));
    s.n_s_grid.clear();
    for (int p = 8; p <= 16; ++p) s.n_s_grid.push_back(1u << p);
    return s;
}

namespace {

// Upper bound on engine cycles per run, used to space trial time origins so
// no two trials ever sample the same instant.
long cycle_upper_bound(const PbssConfig& cfg, std::size_t dim) {
    return static_cast<long>(3 * cfg.n_sources - 1) *
           (2L * cfg.nm.iterations + static_cast<long>(dim) + 2);
}

}  // namespace

std::vector<ExperimentRecord> sweep_success_vs_snr(const std::vector<SourceSignal>& sources,
                                                   const std::vector<LabeledMixing>& mixings,
                                                   const WeightBank& bank, const PbssConfig& pbss,
                                                   const SweepConfig& sweep) {
    if (mixings.empty()) throw std::invalid_argument("sweep: no mixing matrices");
    struct Cell {
        std::size_t mix;
        double f_s;
        std::uint32_t n_s;
    };
    std::vector<Cell> cells;
    for (std::size_t m = 0; m < mixings.size(); ++m)
        for (double f_s : sweep.f_s_grid)
            for (std::uint32_t n_s : sweep.n_s_grid) cells.push_back({m, f_s, n_s});

    std::vector<ExperimentRecord> records(cells.size());
    // Estimator SNR at the high-variance reference point, one per cell.
    parallel_for(cells.size(), [&](std::size_t c) {
        const Cell& cell = cells[c];
        const MixingScenario scenario(sources, mixings[cell.mix].mixing);
        const WeightBank cell_bank = bank.with_noise_seed(mix64(sweep.seed, 2 * c));
        const MixedSignalProbe probe(scenario, cell_bank, sweep.snr_currents_mA);
        const SamplingPlan plan = SamplingPlan::periodic(cell.f_s, cell.n_s);
        const auto [s2q, kq] = estimator_quality(probe, plan, sweep.snr_repeats);
        records[c] = ExperimentRecord{mixings[cell.mix].label, cell.f_s,  cell.n_s,
                                      s2q.snr_db,              kq.snr_db, 0,
                                      sweep.trials};
    });

    // Independently seeded PBSS attempts; failure to complete counts as an
    // unsuccessful attempt.
    const std::size_t total = cells.size() * static_cast<std::size_t>(sweep.trials);
    std::vector<std::uint8_t> ok(total, 0);
    parallel_for(total, [&](std::size_t task) {
        const std::size_t c = task / sweep.trials;
        const int trial = static_cast<int>(task % sweep.trials);
        const Cell& cell = cells[c];
        const MixingScenario scenario(sources, mixings[cell.mix].mixing);
        const WeightBank trial_bank =
            bank.with_noise_seed(mix64(mix64(sweep.seed, 2 * c + 1), trial));
        PbssConfig cfg = pbss;
        const double block = static_cast<double>(cell.n_s) / cell.f_s;
        const double origin =
            trial * (cycle_upper_bound(pbss, trial_bank.size()) + 4) * block;
        cfg.plan = SamplingPlan::periodic(cell.f_s, cell.n_s, origin);
        try {
            const PbssResult result = run_pbss(scenario, trial_bank, cfg);
            ok[task] = pbss_success(result, scenario, trial_bank, origin) ? 1 : 0;
        } catch (const PbssAborted&) {
            ok[task] = 0;
        }
    });
    for (std::size_t c = 0; c < cells.size(); ++c) {
        int n = 0;
        for (int t = 0; t < sweep.trials; ++t)
            n += ok[c * static_cast<std::size_t>(sweep.trials) + t];
        records[c].success_count = n;
    }
    return records;
}

std::vector<QualityRow> sweep_estimator_quality(const MixingScenario& scenario,
                                                const WeightBank& bank,
                                                const SweepConfig& sweep) {
    struct Point {
        double f_s;
        std::uint32_t n_s;
    };
    std::vector<Point> points;
    for (double f_s : sweep.f_s_grid) points.push_back({f_s, 2048});
    for (std::uint32_t n_s : sweep.n_s_grid) points.push_back({7.68e6, n_s});

    std::vector<std::vector<QualityRow>> chunks(points.size());
    parallel_for(points.size(), [&](std::size_t p) {
        const auto [f_s, n_s] = points[p];
        const WeightBank b = bank.with_noise_seed(mix64(sweep.seed, 0x5eedULL + p));
        const MixedSignalProbe probe(scenario, b, sweep.snr_currents_mA);
        const double window = static_cast<double>(n_s) / f_s;

        const SamplingPlan periodic = SamplingPlan::periodic(f_s, n_s);
        const auto [s2p, kp] = estimator_quality(probe, periodic, sweep.snr_repeats);

        const SamplingPlan random = SamplingPlan::random(f_s, n_s, window, mix64(sweep.seed, p));
        const auto [s2r, kr] = estimator_quality(probe, random, sweep.snr_repeats);

        // Predicted S^2 spread if samples were IID draws, evaluated at the
        // random-mode moment estimates.
        const double pred_std = std::sqrt(varvar_iid_predict(s2r.mean, kr.mean, n_s));
        chunks[p] = {
            {f_s, n_s, "S2", s2p.mean, s2p.std, s2p.snr_db, s2p.repeats},
            {f_s, n_s, "K", kp.mean, kp.std, kp.snr_db, kp.repeats},
            {f_s, n_s, "S2_random", s2r.mean, s2r.std, s2r.snr_db, s2r.repeats},
            {f_s, n_s, "K_random", kr.mean, kr.std, kr.snr_db, kr.repeats},
            {f_s, n_s, "S2_iid_pred", s2r.mean, pred_std,
             amplitude_snr_db(s2r.mean, pred_std), s2r.repeats},
        };
    });
    std::vector<QualityRow> rows;
    for (auto& c : chunks) rows.insert(rows.end(), c.begin(), c.end());
    return rows;
}

namespace {

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += buf;
}

}  // namespace

std::string to_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = "mixing,f_s_hz,n_s,s2_snr_db,k_snr_db,success_count,trials\n";
    for (const auto& r : records) {
        out += r.mixing_label;
        out += ',';
        append_num(out, r.f_s);
        out += ',';
        out += std::to_string(r.n_s);
        out += ',';
        append_num(out, r.s2_snr_db);
        out += ',';
        append_num(out, r.k_snr_db);
        out += ',';
        out += std::to_string(r.success_count);
        out += ',';
        out += std::to_string(r.trials);
        out += '\n';
    }
    return out;
}

std::string to_csv(const std::vector<QualityRow>& rows) {
    std::string out = "f_s_hz,n_s,stat,mean,std,snr_db,repeats\n";
    for (const auto& r : rows) {
        append_num(out, r.f_s);
        out += ',';
        out += std::to_string(r.n_s);
        out += ',';
        out += r.stat;
        out += ',';
        append_num(out, r.mean);
        out += ',';
        append_num(out, r.std);
        out += ',';
        append_num(out, r.snr_db);
        out += ',';
        out += std::to_string(r.repeats);
        out += '\n';
    }
    return out;
}

std::string transfer_curve_csv(const WeightBank& bank, int points) {
    if (points < 2) throw std::invalid_argument("transfer_curve_csv: need at least 2 points");
    std::string out = "ring,i_mA,weight\n";
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const RingParams& ring = bank.rings[k];
        for (int p = 0; p < points; ++p) {
            const double i =
                ring.i_min_mA + (ring.i_max_mA - ring.i_min_mA) * p / (points - 1);
            out += std::to_string(k);
            out += ',';
            append_num(out, i);
            out += ',';
            append_num(out, bank.weight(k, i));
            out += '\n';
        }
    }
    return out;
}

}  // namespace pbss
