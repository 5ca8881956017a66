#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "pbss/signal_model.hpp"

using namespace pbss;

namespace {

// Independent oracle: dense numeric integration at >= 16 samples per
// carrier cycle over whole sequence periods.
double dense_variance(const SourceSignal& s, int periods) {
    const double span = periods * s.period();
    const auto n = static_cast<std::size_t>(std::ceil(span * s.carrier_freq * 16.0));
    const double dt = span / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double v = eval_source(s, j * dt);
        acc += v * v;
    }
    return acc / static_cast<double>(n);
}

SourceSignal unit_bit_source(double carrier, double phase = 0.0) {
    SourceSignal s;
    s.bits = {1};
    s.baud_rate = carrier / 10.0;
    s.carrier_freq = carrier;
    s.carrier_phase = phase;
    s.amplitude = std::sqrt(2.0);
    return s;
}

}  // namespace

TEST_CASE("bpsk source basics") {
    const SourceSignal s = make_bpsk_source(1, 1137, 200e6, 1e9 + 176e3);
    CHECK(s.bits.size() == 1137);
    CHECK(s.period() == doctest::Approx(5.685e-6).epsilon(1e-12));
    CHECK(s.amplitude == doctest::Approx(std::sqrt(2.0)));
    for (auto b : s.bits) CHECK((b == 1 || b == -1));

    // same seed, same bits; different seed, different bits
    const SourceSignal again = make_bpsk_source(1, 1137, 200e6, 1e9 + 176e3);
    CHECK(s.bits == again.bits);
    CHECK(make_bpsk_source(2, 1137, 200e6, 1e9 - 176e3).bits != s.bits);

    CHECK_THROWS_AS(make_bpsk_source(1, 0, 200e6, 1e9), std::invalid_argument);
    CHECK_THROWS_AS(make_bpsk_source(1, 8, 0.0, 1e9), std::invalid_argument);
    CHECK_THROWS_AS(make_bpsk_source(1, 8, 200e6, -1.0), std::invalid_argument);
}

TEST_CASE("single-bit sequence degenerates to a sinusoid") {
    const SourceSignal s = make_bpsk_source(1, 1, 123.0, 50.0);
    const double sign = s.bits[0];
    for (double t : {0.0, 0.001, 0.37}) {
        CHECK(eval_source(s, t) ==
              doctest::Approx(sign * std::sqrt(2.0) * std::cos(2.0 * M_PI * 50.0 * t))
                  .epsilon(1e-9));
    }
}

TEST_CASE("eval_source point values") {
    const SourceSignal s = unit_bit_source(50.0);
    CHECK(eval_source(s, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(eval_source(s, 1.0 / (4.0 * 50.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sequence periodicity") {
    // carrier chosen so one sequence period holds an integer cycle count
    const SourceSignal s = make_bpsk_source(11, 1137, 200e6, 1e9);
    const double period = s.period();
    for (double t : {0.0, 1.7e-7, 3.1e-6}) {
        CHECK(eval_source(s, t + period) == doctest::Approx(eval_source(s, t)).epsilon(1e-9));
    }
}

TEST_CASE("unit variance over whole periods") {
    const SourceSignal s = make_bpsk_source(7, 1137, 200e6, 1e9 + 176e3);
    CHECK(dense_variance(s, 1) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sources with distinct seeds decorrelate") {
    const SourceSignal a = make_bpsk_source(1, 1137, 200e6, 1e9 + 176e3);
    const SourceSignal b = make_bpsk_source(2, 1137, 200e6, 1e9 - 176e3);
    const double span = 8.0 * a.period();
    const auto n = static_cast<std::size_t>(std::ceil(span * a.carrier_freq * 8.0));
    const double dt = span / static_cast<double>(n);
    double cross = 0.0;
    for (std::size_t j = 0; j < n; ++j) cross += eval_source(a, j * dt) * eval_source(b, j * dt);
    cross /= static_cast<double>(n);
    CHECK(std::fabs(cross) < 0.02);
}

TEST_CASE("received vector is the exact mixing product") {
    const std::vector<SourceSignal> sources = {make_bpsk_source(1, 64, 1e6, 20e6),
                                               make_bpsk_source(2, 64, 1e6, 23e6)};
    SUBCASE("identity mixing returns the sources") {
        const MixingScenario sc(sources, Matrix::identity(2));
        for (double t : {0.0, 1.3e-6, 5.5e-6}) {
            const Vec r = eval_received(sc, t);
            CHECK(r[0] == eval_source(sources[0], t));
            CHECK(r[1] == eval_source(sources[1], t));
        }
    }
    SUBCASE("general mixing") {
        Matrix m(2, 2);
        m(0, 0) = 0.6; m(0, 1) = 0.4; m(1, 0) = 0.4; m(1, 1) = 0.6;
        const MixingScenario sc(sources, m);
        const double t = 2.2e-6;
        const double s0 = eval_source(sources[0], t), s1 = eval_source(sources[1], t);
        const Vec r = eval_received(sc, t);
        CHECK(r[0] == doctest::Approx(0.6 * s0 + 0.4 * s1).epsilon(1e-15));
        CHECK(r[1] == doctest::Approx(0.4 * s0 + 0.6 * s1).epsilon(1e-15));
    }
}

TEST_CASE("paper mixing matrices act as stated") {
    Matrix m1(2, 2);
    m1(0, 0) = 0.6; m1(0, 1) = 0.4; m1(1, 0) = 0.4; m1(1, 1) = 0.6;
    const Vec ones = {1.0, 1.0};
    const Vec r1 = matvec(m1, ones);
    CHECK(r1[0] == doctest::Approx(1.0));
    CHECK(r1[1] == doctest::Approx(1.0));

    Matrix m2(2, 2);
    m2(0, 0) = 1.0; m2(0, 1) = 0.5; m2(1, 0) = 1.0; m2(1, 1) = 0.2;
    const Vec r2 = matvec(m2, {0.0, 1.0});
    CHECK(r2[0] == doctest::Approx(0.5));
    CHECK(r2[1] == doctest::Approx(0.2));
}

TEST_CASE("mixing linearity in source amplitude") {
    std::vector<SourceSignal> sources = {make_bpsk_source(1, 64, 1e6, 20e6),
                                         make_bpsk_source(2, 64, 1e6, 23e6)};
    Matrix m(2, 2);
    m(0, 0) = 0.9; m(0, 1) = -0.2; m(1, 0) = 0.1; m(1, 1) = 1.1;
    const MixingScenario base(sources, m);
    sources[0].amplitude *= 2.5;
    sources[1].amplitude *= 2.5;
    const MixingScenario scaled(sources, m);
    for (double t : {1e-7, 9e-7}) {
        const Vec r0 = eval_received(base, t), r1 = eval_received(scaled, t);
        CHECK(r1[0] == doctest::Approx(2.5 * r0[0]).epsilon(1e-12));
        CHECK(r1[1] == doctest::Approx(2.5 * r0[1]).epsilon(1e-12));
    }
}

TEST_CASE("scenario construction rejects bad inputs") {
    const std::vector<SourceSignal> sources = {make_bpsk_source(1, 8, 1e6, 20e6),
                                               make_bpsk_source(2, 8, 1e6, 23e6)};
    SUBCASE("singular square mixing") {
        Matrix m(2, 2);
        m(0, 0) = 1.0; m(0, 1) = 1.0; m(1, 0) = 2.0; m(1, 1) = 2.0;
        CHECK_THROWS_AS(MixingScenario(sources, m), std::invalid_argument);
    }
    SUBCASE("fewer received than sources") {
        CHECK_THROWS_AS(MixingScenario(sources, Matrix(1, 2, 0.5)), std::invalid_argument);
    }
    SUBCASE("more received than sources is fine") {
        Matrix m(3, 2, 0.25);
        m(0, 0) = 1.0;
        CHECK_NOTHROW(MixingScenario(sources, m));
    }
    SUBCASE("bits outside +/-1") {
        auto bad = sources;
        bad[0].bits[3] = 0;
        CHECK_THROWS_AS(MixingScenario(bad, Matrix::identity(2)), std::invalid_argument);
    }
}
