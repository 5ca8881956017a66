#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pbss/weight_bank.hpp"

namespace pbss {

enum class SamplingMode { Periodic, Random };

/// When and how samples of the mixed signal are taken. Sample counts are
/// restricted to powers of two, mirroring the right-shift divide of the
/// streaming hardware; arbitrary counts are rejected rather than rounded.
struct SamplingPlan {
    double f_s = 0.0;       // samples / second
    std::uint32_t n_s = 0;  // power of two
    double t_start = 0.0;
    SamplingMode mode = SamplingMode::Periodic;
    double window = 0.0;      // Random mode: samples drawn in [t_start, t_start + window)
    std::uint64_t seed = 0;   // Random mode draw seed

    static SamplingPlan periodic(double f_s, std::uint32_t n_s, double t_start = 0.0);
    static SamplingPlan random(double f_s, std::uint32_t n_s, double window,
                               std::uint64_t seed, double t_start = 0.0);

    SamplingPlan with_start(double t) const;
    /// Wall-clock span of one acquisition; consecutive acquisitions advance
    /// t_start by exactly this much.
    double block_duration() const;
};

void validate_plan(const SamplingPlan& plan);

/// Variance / excess-kurtosis estimate with its acquisition metadata.
struct StatEstimate {
    double s2 = 0.0;
    double k = 0.0;
    SamplingPlan plan;
};

/// Spread of an estimator across repeated acquisitions. snr_db uses the
/// amplitude convention 20 log10(|mean| / std) and is +inf when std == 0.
struct EstimatorQuality {
    double mean = 0.0;
    double std = 0.0;
    double snr_db = 0.0;
    int repeats = 0;
};

/// Sample the probe per the plan. Periodic mode samples t_start + j / f_s;
/// Random mode draws n_s sorted uniform times in the window.
Vec acquire(const MixedSignalProbe& probe, const SamplingPlan& plan);

/// Uncentered second and fourth moments in one accumulation pass.
/// Never throws; callers decide how to treat a zero second moment.
struct Moments {
    double m2 = 0.0;
    double m4 = 0.0;
};
Moments moments(std::span<const double> samples);

/// S^2 = mean(m^2) and K = mean(m^4)/S^4 - 3 from one pass over the samples.
/// Throws std::domain_error when S^2 == 0 (kurtosis undefined) and
/// std::invalid_argument for fewer than 4 samples.
StatEstimate estimate(std::span<const double> samples, const SamplingPlan& plan = {});

/// Diagnostic only: the zero-mean assumption is never enforced per
/// acquisition, matching the streaming hardware.
double sample_mean(std::span<const double> samples);

/// Repeated acquire+estimate over contiguous non-overlapping blocks.
/// Returns (S^2 quality, K quality); std uses the Bessel correction.
std::pair<EstimatorQuality, EstimatorQuality> estimator_quality(const MixedSignalProbe& probe,
                                                                const SamplingPlan& plan,
                                                                int repeats);

/// Predicted variance of the S^2 estimator for IID samples:
/// gamma^2 = S^4/n_s ((K+3) - 1 + 2/(n_s - 1)). The kurtosis argument is the
/// excess convention used everywhere in this library; the prediction formula
/// itself needs the raw fourth standardized moment K+3 (the excess form would
/// go negative for a Gaussian, which the Monte-Carlo check rules out).
double varvar_iid_predict(double s2, double k_excess, std::uint64_t n_s);

/// t_a = n_s / f_s, the time to collect one statistic's worth of samples.
double acquisition_latency(const SamplingPlan& plan);

double amplitude_snr_db(double mean, double std);

}  // namespace pbss
