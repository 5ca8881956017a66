#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "pbss/engine.hpp"
#include "pbss/rng.hpp"

using namespace pbss;

namespace {

Matrix mixing_m1() {
    Matrix m(2, 2);
    m(0, 0) = 0.6; m(0, 1) = 0.4; m(1, 0) = 0.4; m(1, 1) = 0.6;
    return m;
}

MixingScenario scenario_with(const Matrix& m) {
    return MixingScenario({make_bpsk_source(1, 1137, 200e6, 1e9 + 176e3),
                           make_bpsk_source(2, 1137, 200e6, 1e9 - 176e3)},
                          m);
}

std::vector<RingParams> default_rings() {
    return {make_ring(0.5, 0.125, 1.0, 0.0, 5.0), make_ring(0.5, 0.125, 1.0, 0.0, 5.0)};
}

PbssConfig default_cfg() { return PbssConfig{}; }

}  // namespace

TEST_CASE("variance gradient and hessian oracles") {
    const Matrix eye = Matrix::identity(2);
    CHECK(variance_gradient_oracle(eye, {0.0, 0.0}) == Vec{0.0, 0.0});
    CHECK(variance_gradient_oracle(eye, {1.0, 2.0}) == Vec{2.0, 4.0});

    Matrix singular(2, 2);
    singular(0, 0) = 1.0; singular(0, 1) = 2.0; singular(1, 0) = 2.0; singular(1, 1) = 4.0;
    CHECK_THROWS_AS(variance_gradient_oracle(singular, {1.0, 0.0}), std::domain_error);

    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        Matrix m(2, 2);
        for (std::uint64_t attempt = 0;; ++attempt) {
            for (std::size_t e = 0; e < 4; ++e)
                m.data[e] = uniform01(mix64(5 + attempt, 4 * trial + e)) * 2.0 - 1.0;
            if (std::fabs(determinant(m)) >= 0.05) break;
        }
        CHECK(determinant(variance_hessian_oracle(m)) > 0.0);
    }
}

TEST_CASE("step 1 locates the zero-weight point") {
    SUBCASE("ideal weights, noise free") {
        PbssEngine engine(scenario_with(mixing_m1()),
                          WeightBank(default_rings(), WeightModel::Ideal), default_cfg());
        const Vec i0 = engine.step1_find_zero();
        CHECK(std::fabs(i0[0] - 2.0) <= 0.05);
        CHECK(std::fabs(i0[1] - 2.0) <= 0.05);
    }
    SUBCASE("lorentzian weights with default noise") {
        PbssEngine engine(scenario_with(mixing_m1()),
                          WeightBank(default_rings(), WeightModel::Lorentzian, 0.03, 321),
                          default_cfg());
        const Vec i0 = engine.step1_find_zero();
        CHECK(std::fabs(i0[0] - 2.0) <= 0.1);
        CHECK(std::fabs(i0[1] - 2.0) <= 0.1);
        // local minimality spot check along both axes
        const double here = engine.measure(i0).s2;
        for (std::size_t k = 0; k < 2; ++k) {
            Vec off = i0;
            off[k] += 0.6;
            CHECK(here <= engine.measure(off).s2);
        }
    }
}

TEST_CASE("step 2 principal components") {
    PbssConfig cfg = default_cfg();
    cfg.plan = SamplingPlan::periodic(122.88e6, 1u << 16);

    SUBCASE("symmetric mixing puts PC1 on the diagonal") {
        PbssEngine engine(scenario_with(mixing_m1()),
                          WeightBank(default_rings(), WeightModel::Ideal), cfg);
        const Vec i0 = engine.step1_find_zero();
        const auto pcs = engine.step2_pca(i0);
        REQUIRE(pcs.size() == 2);
        CHECK(axis_angle_deg(pcs[0].direction, {1.0, 1.0}) < 2.0);
        CHECK(std::fabs(dot(pcs[0].direction, pcs[1].direction)) <= 1e-9);
        // eigenvalues of M1 M1^T are 1.0 and 0.04
        CHECK(pcs[0].variance / pcs[1].variance == doctest::Approx(25.0).epsilon(0.25));

        SUBCASE("matches a brute-force scan of the variance field") {
            double best = -1.0, best_deg = 0.0;
            for (int d = 0; d < 720; ++d) {
                const double th = d * M_PI / 720.0;
                const Vec dir = {std::cos(th), std::sin(th)};
                const double s2 =
                    engine.measure({i0[0] + 0.6 * dir[0], i0[1] + 0.6 * dir[1]}).s2;
                if (s2 > best) {
                    best = s2;
                    best_deg = d * 0.25;
                }
            }
            CHECK(std::fabs(best_deg - 45.0) < 2.0);
        }
    }
    SUBCASE("isotropic mixing keeps components orthonormal with equal power") {
        PbssEngine engine(scenario_with(Matrix::identity(2)),
                          WeightBank(default_rings(), WeightModel::Ideal), cfg);
        const Vec i0 = engine.step1_find_zero();
        const auto pcs = engine.step2_pca(i0);
        CHECK(std::fabs(norm(pcs[0].direction) - 1.0) <= 1e-9);
        CHECK(std::fabs(dot(pcs[0].direction, pcs[1].direction)) <= 1e-9);
        CHECK(pcs[0].variance / pcs[1].variance == doctest::Approx(1.0).epsilon(0.25));
    }
}

TEST_CASE("whitening matrix") {
    const std::vector<PrincipalComponent> pcs = {{{1.0, 0.0}, 0.09}, {{0.0, 1.0}, 0.0036}};
    const Matrix w = build_whitening(pcs, 0.6);
    const Matrix id = matmul(inverse(w), w);
    CHECK(std::fabs(id(0, 0) - 1.0) <= 1e-9);
    CHECK(std::fabs(id(0, 1)) <= 1e-9);
    CHECK(std::fabs(id(1, 1) - 1.0) <= 1e-9);
    CHECK_THROWS_AS(build_whitening({{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 1.0}}, 0.6),
                    std::domain_error);

    SUBCASE("variance becomes isotropic in the whitened basis") {
        PbssConfig cfg = default_cfg();
        cfg.plan = SamplingPlan::periodic(122.88e6, 1u << 16);
        // the whitened displacement along the weak component reaches ~5 mA
        // by construction, so center the rings at i0 = 10 with room around
        const std::vector<RingParams> wide(2, make_ring(0.5, 0.005, 1.0, 0.0, 20.0));
        PbssEngine engine(scenario_with(mixing_m1()),
                          WeightBank(wide, WeightModel::Ideal), cfg);
        const Vec i0 = engine.step1_find_zero();
        const Matrix wm = build_whitening(engine.step2_pca(i0), 0.6);
        double lo = 1e30, hi = 0.0;
        for (int d = 0; d < 8; ++d) {
            const double th = d * M_PI / 8.0;
            const Vec wp = {std::cos(th), std::sin(th)};
            const Vec di = matvec(wm, wp);
            const double s2 = engine.measure({i0[0] + di[0], i0[1] + di[1]}).s2;
            lo = std::min(lo, s2);
            hi = std::max(hi, s2);
        }
        CHECK(hi / lo <= 1.10);
    }
}

TEST_CASE("step 3 independent components for separated sources") {
    PbssConfig cfg = default_cfg();
    PbssEngine engine(scenario_with(Matrix::identity(2)),
                      WeightBank(default_rings(), WeightModel::Ideal), cfg);
    const Vec i0 = engine.step1_find_zero();
    const Matrix w = build_whitening(engine.step2_pca(i0), cfg.linear_radius);
    const auto ics = engine.step3_ica(i0, w);
    REQUIRE(ics.size() == 2);
    CHECK(std::fabs(dot(ics[0], ics[1])) <= 1e-9);
    // map to current space; sources are already separated, so the axes win
    const Vec d0 = normalized(matvec(w, ics[0]));
    const Vec d1 = normalized(matvec(w, ics[1]));
    const double a0 = std::min(axis_angle_deg(d0, {1.0, 0.0}), axis_angle_deg(d0, {0.0, 1.0}));
    const double a1 = std::min(axis_angle_deg(d1, {1.0, 0.0}), axis_angle_deg(d1, {0.0, 1.0}));
    CHECK(a0 < 3.0);
    CHECK(a1 < 3.0);
    CHECK(axis_angle_deg(d0, d1) > 45.0);  // distinct axes
}

TEST_CASE("full run separates the symmetric mixture") {
    const MixingScenario sc = scenario_with(mixing_m1());
    const WeightBank bank(default_rings(), WeightModel::Ideal);
    PbssEngine engine(sc, bank, default_cfg());
    const PbssResult res = engine.run();

    // rows of inv(M1) are (3,-2)/sqrt(13) and (-2,3)/sqrt(13)
    const std::vector<Vec> want = {{3.0, -2.0}, {-2.0, 3.0}};
    REQUIRE(res.ics_final.size() == 2);
    for (const Vec& f : res.ics_final) {
        const Vec dir = sub(f, res.i0_hat);
        const double best =
            std::min(axis_angle_deg(dir, want[0]), axis_angle_deg(dir, want[1]));
        CHECK(best < 5.0);
    }
    // both rows must be claimed
    const Vec d0 = sub(res.ics_final[0], res.i0_hat);
    const Vec d1 = sub(res.ics_final[1], res.i0_hat);
    CHECK(axis_angle_deg(d0, d1) > 10.0);

    SUBCASE("demixed leakage is small") {
        // gains seen by each source: g = M^T w
        const Matrix mt = transpose(sc.mixing);
        for (const Vec& f : res.ics_final) {
            const Vec g = matvec(mt, sub(f, res.i0_hat));
            const double hi = std::max(std::fabs(g[0]), std::fabs(g[1]));
            const double lo = std::min(std::fabs(g[0]), std::fabs(g[1]));
            CHECK(lo / hi < 0.02);
        }
    }
    SUBCASE("structural invariants") {
        CHECK(res.pcs.size() == 2);
        CHECK(std::fabs(norm(res.pcs[0].direction) - 1.0) <= 1e-9);
        CHECK(std::fabs(dot(res.pcs[0].direction, res.pcs[1].direction)) <= 1e-9);
        CHECK(std::fabs(norm(res.ics_whitened[0]) - 1.0) <= 1e-12);
        CHECK(std::fabs(dot(res.ics_whitened[0], res.ics_whitened[1])) <= 1e-9);
        CHECK(res.traces.size() == 7);  // 1 + 2 + 2 + 2 labeled traces
        CHECK(res.cycle_count <= 5 * (2 * 40 + 4));
        // kurtosis refinement never ends above its start
        for (const auto& t : res.traces)
            if (t.label.rfind("step4", 0) == 0) CHECK(t.values.back() <= t.values.front());
    }
}

TEST_CASE("random well-conditioned mixtures are recovered") {
    // one instance with a brute-force kurtosis scan as ground truth
    Matrix m(2, 2);
    m(0, 0) = 0.9; m(0, 1) = 0.15; m(1, 0) = -0.3; m(1, 1) = 0.8;
    REQUIRE(std::fabs(determinant(m)) > 0.1);
    const MixingScenario sc = scenario_with(m);
    const WeightBank bank(default_rings(), WeightModel::Ideal);
    PbssEngine engine(sc, bank, default_cfg());
    const PbssResult res = engine.run();

    const Matrix minv = inverse(m);
    const std::vector<Vec> rows = {{minv(0, 0), minv(0, 1)}, {minv(1, 0), minv(1, 1)}};
    for (const Vec& f : res.ics_final) {
        const Vec dir = sub(f, res.i0_hat);
        CHECK(std::min(axis_angle_deg(dir, rows[0]), axis_angle_deg(dir, rows[1])) < 5.0);
    }

    // scan the kurtosis field on the linear circle: minima sit on the rows
    PbssEngine scanner(sc, bank, default_cfg());
    double best_k = 1e30;
    double best_deg = 0.0;
    for (int d = 0; d < 3600; ++d) {
        const double th = d * M_PI / 3600.0;
        const Vec cur = {res.i0_hat[0] + 0.6 * std::cos(th), res.i0_hat[1] + 0.6 * std::sin(th)};
        const double k = scanner.measure(cur).k;
        if (k < best_k) {
            best_k = k;
            best_deg = d * 0.05;
        }
    }
    const Vec best_dir = {std::cos(best_deg * M_PI / 180.0), std::sin(best_deg * M_PI / 180.0)};
    CHECK(std::min(axis_angle_deg(best_dir, rows[0]), axis_angle_deg(best_dir, rows[1])) < 2.0);
}

TEST_CASE("kurtosis minima are local along the circle") {
    const MixingScenario sc = scenario_with(mixing_m1());
    const WeightBank bank(default_rings(), WeightModel::Ideal);
    PbssEngine engine(sc, bank, default_cfg());
    const PbssResult res = engine.run();
    PbssEngine probe(sc, bank, default_cfg());
    auto k_at = [&](const Vec& dir) {
        return probe.measure({res.i0_hat[0] + 0.6 * dir[0], res.i0_hat[1] + 0.6 * dir[1]}).k;
    };
    const Vec d0 = res.ics_sphere_current[0];
    const Vec d1 = res.ics_sphere_current[1];
    Vec mid = normalized(add(d0, norm(add(d0, d1)) > 1e-9 ? d1 : scale(d1, -1.0)));
    const double kmid = k_at(mid);
    CHECK(k_at(d0) <= kmid);
    CHECK(k_at(d1) <= kmid);
}

TEST_CASE("noisy default run succeeds and seeks amplitude") {
    const MixingScenario sc = scenario_with(mixing_m1());
    const WeightBank bank(default_rings(), WeightModel::Lorentzian, 0.03, 1234);
    const PbssResult res = run_pbss(sc, bank, default_cfg());
    for (const Vec& f : res.ics_final)
        CHECK(norm(sub(f, res.i0_hat)) >= 0.6 - 0.05);
}

TEST_CASE("origin theorem holds for the measured variance") {
    const MixingScenario sc = scenario_with(mixing_m1());
    const WeightBank bank(default_rings(), WeightModel::Ideal);
    PbssEngine engine(sc, bank, default_cfg());
    const Vec i0 = engine.step1_find_zero();
    const double floor = engine.measure(i0).s2;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const double th = uniform01(mix64(3, trial)) * 2.0 * M_PI;
        const Vec p = {i0[0] + 0.3 * std::cos(th), i0[1] + 0.3 * std::sin(th)};
        CHECK(engine.measure(p).s2 > floor);
    }
}

TEST_CASE("aborted runs carry partial traces") {
    // silent sources: every variance is zero, so PCA reports a degenerate
    // component against the measured noise floor
    std::vector<SourceSignal> silent = {make_bpsk_source(1, 64, 1e6, 20e6),
                                        make_bpsk_source(2, 64, 1e6, 23e6)};
    silent[0].amplitude = 0.0;
    silent[1].amplitude = 0.0;
    const MixingScenario sc(silent, mixing_m1());
    const WeightBank bank(default_rings(), WeightModel::Ideal);
    PbssConfig cfg = default_cfg();
    cfg.plan = SamplingPlan::periodic(10e6, 256);
    try {
        run_pbss(sc, bank, cfg);
        FAIL("expected PbssAborted");
    } catch (const PbssAborted& e) {
        CHECK(e.traces.size() >= 1);
        CHECK(e.cycle_count > 0);
    }
}

TEST_CASE("engine rejects inconsistent dimensions") {
    const MixingScenario sc = scenario_with(mixing_m1());
    std::vector<RingParams> three(3, make_ring(0.5, 0.125, 1.0, 0.0, 5.0));
    CHECK_THROWS_AS(PbssEngine(sc, WeightBank(three, WeightModel::Ideal), default_cfg()),
                    std::invalid_argument);
    PbssConfig bad = default_cfg();
    bad.linear_radius = 3.5;  // sphere would poke outside the current range
    CHECK_THROWS_AS(PbssEngine(sc, WeightBank(default_rings(), WeightModel::Ideal), bad),
                    std::invalid_argument);
}

TEST_CASE("latency model") {
    const SamplingPlan plan = SamplingPlan::periodic(122.88e6, 1u << 14);
    CHECK(acquisition_latency(plan) == doctest::Approx(133e-6).epsilon(0.01));
    CHECK(pbss_cycle_estimate(2, 40) == 200);
    const double total = latency_model(2, 40, plan);
    CHECK(total < 30e-3);
    CHECK(total == doctest::Approx(200 * 16384 / 122.88e6).epsilon(1e-12));

    // communication-dominated configuration
    CHECK(latency_model(2, 40, plan, {6e-3, 0.0, 0.0}) >= 1.2);
    CHECK(latency_model(2, 0, plan) == 0.0);
}
