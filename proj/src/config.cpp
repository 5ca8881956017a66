#include "pbss/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pbss {

using nlohmann::json;

SourceSignal SourceSpec::build() const {
    return make_bpsk_source(seed, n_bits, baud_hz, carrier_hz, phase_rad);
}

namespace {

std::vector<RingParams> default_rings() {
    return {make_ring(0.5, 0.125, 1.0, 0.0, 5.0), make_ring(0.5, 0.125, 1.0, 0.0, 5.0)};
}

}  // namespace

AppConfig::AppConfig() : bank(default_rings(), WeightModel::Lorentzian, 0.03, 42) {}

MixingScenario AppConfig::scenario() const { return MixingScenario(built_sources(), mixing); }

std::vector<SourceSignal> AppConfig::built_sources() const {
    std::vector<SourceSignal> out;
    out.reserve(sources.size());
    for (const auto& s : sources) out.push_back(s.build());
    return out;
}

Matrix mixing_symmetric() {
    Matrix m(2, 2);
    m(0, 0) = 0.6;
    m(0, 1) = 0.4;
    m(1, 0) = 0.4;
    m(1, 1) = 0.6;
    return m;
}

Matrix mixing_jamming() {
    Matrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 0.5;
    m(1, 0) = 1.0;
    m(1, 1) = 0.2;
    return m;
}

AppConfig default_config() {
    AppConfig cfg;
    cfg.sources = {SourceSpec{1, 1137, 200e6, 1e9 + 176e3, 0.0},
                   SourceSpec{2, 1137, 200e6, 1e9 - 176e3, 0.0}};
    cfg.mixing = mixing_symmetric();
    cfg.mixing_label = "m1";
    cfg.sweep_mixings = {{"m1", mixing_symmetric()}, {"m2", mixing_jamming()}};
    cfg.pbss.plan = SamplingPlan::periodic(122.88e6, 1u << 14);
    cfg.sweep = SweepConfig::desk_preset();
    return cfg;
}

namespace {

Matrix parse_matrix(const json& j) {
    std::vector<Vec> rows;
    for (const auto& row : j) rows.push_back(row.get<Vec>());
    return Matrix::from_rows(rows);
}

SamplingPlan parse_plan(const json& j, const SamplingPlan& base) {
    SamplingPlan p = base;
    p.f_s = j.value("f_s_hz", p.f_s);
    p.n_s = j.value("n_s", p.n_s);
    p.t_start = j.value("t_start_s", p.t_start);
    if (j.contains("mode")) {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "periodic")
            p.mode = SamplingMode::Periodic;
        else if (mode == "random")
            p.mode = SamplingMode::Random;
        else
            throw std::invalid_argument("config: unknown sampling mode '" + mode + "'");
    }
    p.window = j.value("window_s", p.window);
    p.seed = j.value("seed", p.seed);
    validate_plan(p);
    return p;
}

WeightBank parse_bank(const json& j, const WeightBank& base) {
    std::vector<RingParams> rings = base.rings;
    if (j.contains("rings")) {
        rings.clear();
        for (const auto& r : j.at("rings"))
            rings.push_back(make_ring(r.at("a").get<double>(), r.at("b_per_mA2").get<double>(),
                                      r.at("R").get<double>(), r.at("i_min_mA").get<double>(),
                                      r.at("i_max_mA").get<double>()));
    }
    WeightModel model = base.model;
    if (j.contains("weight_model")) {
        const std::string m = j.at("weight_model").get<std::string>();
        if (m == "ideal")
            model = WeightModel::Ideal;
        else if (m == "lorentzian")
            model = WeightModel::Lorentzian;
        else
            throw std::invalid_argument("config: unknown weight model '" + m + "'");
    }
    return WeightBank(rings, model, j.value("noise_std", base.noise_std),
                      j.value("noise_seed", base.noise_seed));
}

}  // namespace

AppConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    AppConfig cfg = default_config();
    if (j.contains("scenario")) {
        const json& sc = j.at("scenario");
        if (sc.contains("sources")) {
            cfg.sources.clear();
            for (const auto& s : sc.at("sources")) {
                SourceSpec spec;
                spec.seed = s.value("seed", spec.seed);
                spec.n_bits = s.at("n_bits").get<std::uint32_t>();
                spec.baud_hz = s.at("baud_hz").get<double>();
                spec.carrier_hz = s.at("carrier_hz").get<double>();
                spec.phase_rad = s.value("phase_rad", 0.0);
                cfg.sources.push_back(spec);
            }
        }
        if (sc.contains("mixing")) cfg.mixing = parse_matrix(sc.at("mixing"));
        cfg.mixing_label = sc.value("label", cfg.mixing_label);
    }
    if (j.contains("bank")) cfg.bank = parse_bank(j.at("bank"), cfg.bank);
    if (j.contains("pbss")) {
        const json& p = j.at("pbss");
        cfg.pbss.n_sources = p.value("n_sources", cfg.pbss.n_sources);
        cfg.pbss.linear_radius = p.value("linear_radius_mA", cfg.pbss.linear_radius);
        cfg.pbss.repeats_success = p.value("repeats_success", cfg.pbss.repeats_success);
        if (p.contains("plan")) cfg.pbss.plan = parse_plan(p.at("plan"), cfg.pbss.plan);
        if (p.contains("nelder_mead")) {
            const json& nm = p.at("nelder_mead");
            cfg.pbss.nm.iterations = nm.value("iterations", cfg.pbss.nm.iterations);
            cfg.pbss.nm.reflection = nm.value("reflection", cfg.pbss.nm.reflection);
            cfg.pbss.nm.expansion = nm.value("expansion", cfg.pbss.nm.expansion);
            cfg.pbss.nm.contraction = nm.value("contraction", cfg.pbss.nm.contraction);
            cfg.pbss.nm.shrink = nm.value("shrink", cfg.pbss.nm.shrink);
            cfg.pbss.nm.initial_step = nm.value("initial_step", cfg.pbss.nm.initial_step);
            cfg.pbss.nm.sphere_initial_step =
                nm.value("sphere_initial_step", cfg.pbss.nm.sphere_initial_step);
            validate_nm_config(cfg.pbss.nm);
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.value("full_grid", false)) cfg.sweep = SweepConfig::full_grid();
        if (s.contains("f_s_hz")) cfg.sweep.f_s_grid = s.at("f_s_hz").get<std::vector<double>>();
        if (s.contains("n_s"))
            cfg.sweep.n_s_grid = s.at("n_s").get<std::vector<std::uint32_t>>();
        cfg.sweep.trials = s.value("trials", cfg.sweep.trials);
        cfg.sweep.snr_repeats = s.value("snr_repeats", cfg.sweep.snr_repeats);
        if (s.contains("snr_currents_mA"))
            cfg.sweep.snr_currents_mA = s.at("snr_currents_mA").get<Vec>();
        if (s.contains("mixings")) {
            cfg.sweep_mixings.clear();
            for (const auto& m : s.at("mixings"))
                cfg.sweep_mixings.push_back(
                    {m.at("label").get<std::string>(), parse_matrix(m.at("matrix"))});
        }
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.sweep.seed = cfg.seed;

    // Fail fast on inconsistent documents.
    cfg.scenario();
    for (std::uint32_t n : cfg.sweep.n_s_grid)
        if (n == 0 || (n & (n - 1)) != 0)
            throw std::invalid_argument("config: sweep n_s values must be powers of two");
    validate_pbss_config(cfg.pbss, cfg.bank);
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::string result_to_json(const PbssResult& result) {
    json j;
    j["i0_hat"] = result.i0_hat;
    j["pcs"] = json::array();
    for (const auto& pc : result.pcs)
        j["pcs"].push_back({{"direction", pc.direction}, {"variance", pc.variance}});
    j["whitening"] = matrix_to_json(result.whitening);
    j["ics_sphere"] = json::array();
    for (std::size_t i = 0; i < result.ics_whitened.size(); ++i)
        j["ics_sphere"].push_back({{"whitened", result.ics_whitened[i]},
                                   {"current", result.ics_sphere_current[i]}});
    j["ics_final"] = result.ics_final;
    j["cycle_count"] = result.cycle_count;
    j["step_traces"] = json::array();
    for (const auto& t : result.traces)
        j["step_traces"].push_back({{"label", t.label}, {"values", t.values}});
    return j.dump(2);
}

namespace {

struct LatencyRow {
    std::uint32_t n_s;
    double f_s, t_a, total;
    long cycles;
};

std::vector<LatencyRow> latency_rows(const AppConfig& cfg, const CycleOverheads& ov) {
    std::vector<LatencyRow> rows;
    for (std::uint32_t n_s : cfg.sweep.n_s_grid)
        for (double f_s : cfg.sweep.f_s_grid) {
            const SamplingPlan plan = SamplingPlan::periodic(f_s, n_s);
            rows.push_back({n_s, f_s, acquisition_latency(plan),
                            latency_model(cfg.pbss.n_sources, cfg.pbss.nm.iterations, plan, ov),
                            pbss_cycle_estimate(cfg.pbss.n_sources, cfg.pbss.nm.iterations)});
        }
    return rows;
}

}  // namespace

std::string latency_table_json(const AppConfig& cfg, const CycleOverheads& ov) {
    json arr = json::array();
    for (const auto& r : latency_rows(cfg, ov))
        arr.push_back({{"n_s", r.n_s},
                       {"f_s_hz", r.f_s},
                       {"t_a_s", r.t_a},
                       {"cycles", r.cycles},
                       {"total_s", r.total}});
    return arr.dump(2);
}

std::string latency_table_csv(const AppConfig& cfg, const CycleOverheads& ov) {
    std::string out = "n_s,f_s_hz,t_a_s,cycles,total_s\n";
    char buf[128];
    for (const auto& r : latency_rows(cfg, ov)) {
        std::snprintf(buf, sizeof buf, "%u,%.10g,%.10g,%ld,%.10g\n", r.n_s, r.f_s, r.t_a,
                      r.cycles, r.total);
        out += buf;
    }
    return out;
}

std::string records_to_json(const std::vector<ExperimentRecord>& records) {
    json arr = json::array();
    for (const auto& r : records)
        arr.push_back({{"mixing", r.mixing_label},
                       {"f_s_hz", r.f_s},
                       {"n_s", r.n_s},
                       {"s2_snr_db", r.s2_snr_db},
                       {"k_snr_db", r.k_snr_db},
                       {"success_count", r.success_count},
                       {"trials", r.trials}});
    return arr.dump(2);
}

std::string quality_rows_to_json(const std::vector<QualityRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"f_s_hz", r.f_s},
                       {"n_s", r.n_s},
                       {"stat", r.stat},
                       {"mean", r.mean},
                       {"std", r.std},
                       {"snr_db", r.snr_db},
                       {"repeats", r.repeats}});
    return arr.dump(2);
}

}  // namespace pbss
