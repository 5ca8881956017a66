#include "pbss/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pbss/rng.hpp"

namespace pbss {

SamplingPlan SamplingPlan::periodic(double f_s, std::uint32_t n_s, double t_start) {
    SamplingPlan p{f_s, n_s, t_start, SamplingMode::Periodic, 0.0, 0};
    validate_plan(p);
    return p;
}

SamplingPlan SamplingPlan::random(double f_s, std::uint32_t n_s, double window,
                                  std::uint64_t seed, double t_start) {
    SamplingPlan p{f_s, n_s, t_start, SamplingMode::Random, window, seed};
    validate_plan(p);
    return p;
}

SamplingPlan SamplingPlan::with_start(double t) const {
    SamplingPlan p(*this);
    p.t_start = t;
    return p;
}

double SamplingPlan::block_duration() const {
    return mode == SamplingMode::Periodic ? static_cast<double>(n_s) / f_s : window;
}

void validate_plan(const SamplingPlan& plan) {
    if (!(plan.f_s > 0.0)) throw std::invalid_argument("sampling plan: f_s must be > 0");
    if (plan.n_s == 0 || !std::has_single_bit(plan.n_s))
        throw std::invalid_argument("sampling plan: n_s must be a power of two");
    if (plan.mode == SamplingMode::Random && !(plan.window > 0.0))
        throw std::invalid_argument("sampling plan: random mode needs a positive window");
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Carrier phasor advanced by complex rotation: one multiply per sample
// instead of a cos() with a huge argument. Renormalized periodically so the
// accumulated drift stays near double-precision rounding.
struct CarrierOsc {
    double re, im, rot_re, rot_im, gain;

    CarrierOsc(const SourceSignal& s, double gain_in, double t0, double dt) : gain(gain_in) {
        const double c0 = s.carrier_freq * t0;
        const double th0 = kTwoPi * (c0 - std::floor(c0)) + s.carrier_phase;
        re = std::cos(th0);
        im = std::sin(th0);
        const double dc = s.carrier_freq * dt;
        const double thd = kTwoPi * (dc - std::floor(dc));
        rot_re = std::cos(thd);
        rot_im = std::sin(thd);
    }

    void advance() {
        const double r = re * rot_re - im * rot_im;
        im = re * rot_im + im * rot_re;
        re = r;
    }

    void renormalize() {
        const double n = std::sqrt(re * re + im * im);
        re /= n;
        im /= n;
    }
};

}  // namespace

Vec acquire(const MixedSignalProbe& probe, const SamplingPlan& plan) {
    validate_plan(plan);
    Vec out(plan.n_s);
    if (plan.mode == SamplingMode::Periodic) {
        const double dt = 1.0 / plan.f_s;
        const auto& sources = probe.scenario.sources;
        std::vector<CarrierOsc> osc;
        osc.reserve(sources.size());
        for (std::size_t i = 0; i < sources.size(); ++i)
            osc.emplace_back(sources[i], probe.source_gain[i] * sources[i].amplitude,
                             plan.t_start, dt);
        const bool noisy = probe.bank.noise_std > 0.0;
        for (std::uint32_t j = 0; j < plan.n_s; ++j) {
            // t must equal t_start + j / f_s bit-for-bit: the noise draw is
            // keyed by the time's bit pattern.
            const double t = plan.t_start + static_cast<double>(j) / plan.f_s;
            double m = 0.0;
            for (std::size_t i = 0; i < sources.size(); ++i) {
                const auto& s = sources[i];
                const auto n = static_cast<std::int64_t>(s.bits.size());
                std::int64_t idx = static_cast<std::int64_t>(std::floor(t * s.baud_rate)) % n;
                if (idx < 0) idx += n;
                m += osc[i].gain * s.bits[static_cast<std::size_t>(idx)] * osc[i].re;
                osc[i].advance();
            }
            if (noisy)
                m += probe.bank.noise_std *
                     gaussian(probe.bank.noise_seed, std::bit_cast<std::uint64_t>(t));
            out[j] = m;
            if ((j & 1023u) == 1023u)
                for (auto& o : osc) o.renormalize();
        }
    } else {
        // Draws depend on (seed, t_start) so consecutive windows sample
        // fresh positions.
        const std::uint64_t s = mix64(plan.seed, std::bit_cast<std::uint64_t>(plan.t_start));
        Vec times(plan.n_s);
        for (std::uint32_t j = 0; j < plan.n_s; ++j)
            times[j] = plan.t_start + uniform01(mix64(s, j)) * plan.window;
        std::sort(times.begin(), times.end());
        for (std::uint32_t j = 0; j < plan.n_s; ++j) out[j] = eval_mixed(probe, times[j]);
    }
    return out;
}

Moments moments(std::span<const double> samples) {
    // Single accumulation pass: both power sums build up together as each
    // sample arrives, like the streaming statistic generator.
    double sum2 = 0.0;
    double sum4 = 0.0;
    for (double m : samples) {
        const double m2 = m * m;
        sum2 += m2;
        sum4 += m2 * m2;
    }
    const double n = static_cast<double>(samples.size());
    return Moments{sum2 / n, sum4 / n};
}

StatEstimate estimate(std::span<const double> samples, const SamplingPlan& plan) {
    if (samples.size() < 4) throw std::invalid_argument("estimate: need at least 4 samples");
    const Moments m = moments(samples);
    if (m.m2 == 0.0) throw std::domain_error("estimate: degenerate signal, kurtosis undefined");
    return StatEstimate{m.m2, m.m4 / (m.m2 * m.m2) - 3.0, plan};
}

double sample_mean(std::span<const double> samples) {
    double sum = 0.0;
    for (double m : samples) sum += m;
    return sum / static_cast<double>(samples.size());
}

std::pair<EstimatorQuality, EstimatorQuality> estimator_quality(const MixedSignalProbe& probe,
                                                                const SamplingPlan& plan,
                                                                int repeats) {
    if (repeats < 2) throw std::invalid_argument("estimator_quality: repeats must be >= 2");
    Vec s2s(repeats), ks(repeats);
    const double block = plan.block_duration();
    for (int r = 0; r < repeats; ++r) {
        const SamplingPlan p = plan.with_start(plan.t_start + r * block);
        const StatEstimate e = estimate(acquire(probe, p), p);
        s2s[r] = e.s2;
        ks[r] = e.k;
    }
    auto summarize = [repeats](const Vec& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= repeats;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double std = std::sqrt(ss / (repeats - 1));
        return EstimatorQuality{mean, std, amplitude_snr_db(mean, std), repeats};
    };
    return {summarize(s2s), summarize(ks)};
}

double varvar_iid_predict(double s2, double k_excess, std::uint64_t n_s) {
    if (n_s < 2) throw std::invalid_argument("varvar_iid_predict: n_s must be >= 2");
    const double n = static_cast<double>(n_s);
    return s2 * s2 / n * ((k_excess + 3.0) - 1.0 + 2.0 / (n - 1.0));
}

double acquisition_latency(const SamplingPlan& plan) {
    validate_plan(plan);
    return static_cast<double>(plan.n_s) / plan.f_s;
}

double amplitude_snr_db(double mean, double std) {
    if (std == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(std::fabs(mean) / std);
}

}  // namespace pbss
