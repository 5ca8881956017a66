// Command-line front end: transfer curves, estimator sweeps, success sweeps,
// single PBSS runs, the latency model, and the analytic self-checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pbss/config.hpp"
#include "pbss/demod.hpp"
#include "pbss/rng.hpp"
#include "pbss/sweeps.hpp"

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

pbss::AppConfig load(const GlobalOpts& g) {
    pbss::AppConfig cfg =
        g.config_path.empty() ? pbss::default_config() : pbss::load_config(g.config_path);
    if (g.seed_set) {
        cfg.seed = g.seed;
        cfg.sweep.seed = g.seed;
    }
    return cfg;
}

int emit(const GlobalOpts& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(g.out_path);
    if (!out) {
        std::cerr << "error: cannot write '" << g.out_path << "'\n";
        return 1;
    }
    out << text;
    return 0;
}

bool check(bool ok, const std::string& label) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
    return ok;
}

// Analytic oracle checks: closed-form zero-weight current and linearity,
// the variance gradient/Hessian, and the kurtosis reference constants.
int run_validate() {
    using namespace pbss;
    bool all = true;

    bool zeros_ok = true, defect_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = uniform01(mix64(11, 3 * trial)) * 1.9 - 0.95;
        const double b = 0.02 + uniform01(mix64(11, 3 * trial + 1)) * 0.5;
        const double r = 0.2 + uniform01(mix64(11, 3 * trial + 2)) * 3.0;
        const RingParams ring = make_ring(a, b, r, 0.0, 1e6);
        const double i0 = zero_weight_current(ring);
        zeros_ok &= std::fabs(photocurrent_weight(ring, i0)) <= 1e-12;
        const double h = 1e-4;
        const double fd2 = (photocurrent_weight(ring, i0 + h) - 2.0 * photocurrent_weight(ring, i0) +
                            photocurrent_weight(ring, i0 - h)) /
                           (h * h);
        defect_ok &= std::fabs(fd2 - linearity_defect(ring)) <= 1e-5;
    }
    all &= check(zeros_ok, "zero-weight current nulls the photocurrent (1000 random rings)");
    all &= check(defect_ok, "analytic curvature at i0 matches finite differences");

    const RingParams tuned = make_ring(0.5, 0.125, 1.0, 0.0, 5.0);
    all &= check(std::fabs(linearity_defect(tuned)) < 1e-12,
                 "curvature vanishes at the half-detuned operating point");

    bool grad_ok = true, hess_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix m(2, 2);
        for (std::uint64_t attempt = 0;; ++attempt) {
            for (std::size_t e = 0; e < 4; ++e)
                m.data[e] = uniform01(mix64(77 + attempt, 4 * trial + e)) * 2.0 - 1.0;
            if (std::fabs(determinant(m)) >= 0.1) break;
        }
        const Vec w = {0.3, -0.2};
        const Vec g = variance_gradient_oracle(m, w);
        const Matrix h = variance_hessian_oracle(m);
        const Vec hw = matvec(h, w);
        grad_ok &= std::fabs(g[0] - hw[0]) < 1e-12 && std::fabs(g[1] - hw[1]) < 1e-12;
        hess_ok &= determinant(h) > 0.0;
    }
    all &= check(grad_ok, "variance gradient equals Hessian action on w");
    all &= check(hess_ok, "variance Hessian determinant positive (convexity)");

    // Whole-period sinusoid kurtosis and a large Gaussian draw.
    {
        std::vector<double> samples(4096);
        for (std::size_t j = 0; j < samples.size(); ++j)
            samples[j] = std::sqrt(2.0) * std::cos(6.283185307179586 * 2000.0 * j / 4096.0);
        const auto est = estimate(samples);
        all &= check(std::fabs(est.k + 1.5) < 1e-3 && std::fabs(est.s2 - 1.0) < 1e-9,
                     "whole-period sinusoid: S2 = 1, K = -1.5");
    }
    {
        std::vector<double> samples(1u << 16);
        for (std::size_t j = 0; j < samples.size(); ++j) samples[j] = gaussian(12345, j);
        const auto est = estimate(samples);
        all &= check(std::fabs(est.k) < 0.1, "large IID Gaussian sample: K = 0 +/- 0.1");
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photonic blind source separation simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file");
    app.add_option("--out", g.out_path, "Output path (default stdout)");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "Master seed")->each([&g](const std::string&) {
        g.seed_set = true;
    });

    auto* curve = app.add_subcommand("transfer-curve", "Weight vs current per ring");
    int curve_points = 256;
    curve->add_option("--points", curve_points, "Samples per ring");

    auto* stats = app.add_subcommand("stats-sweep", "Estimator consistency sweep");
    auto* success = app.add_subcommand("success-sweep", "PBSS success rate vs estimator SNR");
    bool full_grid = false;
    success->add_flag("--full", full_grid, "Full 12x9 grid instead of the desk preset");

    auto* run = app.add_subcommand("pbss-run", "Single PBSS run, JSON result");
    auto* latency = app.add_subcommand("latency", "Weight-determination latency table");
    double tc = 0.0, ts = 0.0, tp = 0.0;
    latency->add_option("--tc", tc, "Communication latency per cycle, seconds");
    latency->add_option("--ts", ts, "Statistic latency per cycle, seconds");
    latency->add_option("--tp", tp, "Weight stabilization latency per cycle, seconds");

    app.add_subcommand("validate", "Run the analytic oracle checks");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "validate") return run_validate();

        pbss::AppConfig cfg = load(g);
        if (sub == "transfer-curve") {
            return emit(g, pbss::transfer_curve_csv(cfg.bank, curve_points));
        }
        if (sub == "stats-sweep") {
            const auto rows = pbss::sweep_estimator_quality(cfg.scenario(), cfg.bank, cfg.sweep);
            return emit(g, g.format == "json" ? pbss::quality_rows_to_json(rows)
                                              : pbss::to_csv(rows));
        }
        if (sub == "success-sweep") {
            if (full_grid) {
                const auto full = pbss::SweepConfig::full_grid();
                cfg.sweep.f_s_grid = full.f_s_grid;
                cfg.sweep.n_s_grid = full.n_s_grid;
            }
            const auto records = pbss::sweep_success_vs_snr(
                cfg.built_sources(), cfg.sweep_mixings, cfg.bank, cfg.pbss, cfg.sweep);
            return emit(g, g.format == "json" ? pbss::records_to_json(records)
                                              : pbss::to_csv(records));
        }
        if (sub == "pbss-run") {
            const auto bank = cfg.bank.with_noise_seed(pbss::mix64(cfg.seed, 0xb1e55ULL));
            const auto result = pbss::run_pbss(cfg.scenario(), bank, cfg.pbss);
            return emit(g, pbss::result_to_json(result) + "\n");
        }
        if (sub == "latency") {
            const pbss::CycleOverheads ov{tc, ts, tp};
            return emit(g, g.format == "json" ? pbss::latency_table_json(cfg, ov) + "\n"
                                              : pbss::latency_table_csv(cfg, ov));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
